#include <gtest/gtest.h>

#include <cmath>

#include "framekit/framekit.hpp"
#include "oracles.hpp"

using namespace framekit;

namespace {

MultiplierSystem scaled(const MultiplierSystem& sys, double s) {
  Matrix x = sys.x().analysis(), f = sys.f().analysis();
  for (double& v : x.data()) v *= s;
  for (double& v : f.data()) v /= s;
  return MultiplierSystem(Frame(std::move(x)), Frame(std::move(f)), sys.symbol());
}

}  // namespace

TEST(ExplicitSplit, ExampleBasisPair) {
  const auto r = explicit_split(example_basis_pair(4));
  for (double d : r.d) EXPECT_EQ(d, 1.0);
  EXPECT_NEAR(r.bessel_x, 1.0, 1e-12);
  EXPECT_NEAR(r.bessel_f, 4.0, 1e-12);
  EXPECT_EQ(r.method, SplitMethod::explicit_weights);
}

TEST(ExplicitSplit, SymmetricPair) {
  const Frame x = random_gaussian_frame(5, 3, 2);
  const auto r = explicit_split(MultiplierSystem(x, x));
  for (double d : r.d) EXPECT_NEAR(d, 1.0, 1e-15);
  EXPECT_NEAR(r.bessel_x, r.bessel_f, 1e-12 * r.bessel_x);
}

TEST(ExplicitSplit, BoundedByConstantSquaredOverB) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sys = random_gaussian_system(2 + seed % 7, 1 + seed % 4, seed);
    const auto r = explicit_split(sys);
    const double c = exact_constant(sys).value;
    double b = INFINITY;
    for (std::size_t j = 0; j < sys.n(); ++j) b = std::min(b, sys.x().norm(j) * sys.f().norm(j));
    EXPECT_LE(r.bessel_x, c * c / b + 1e-9);
    EXPECT_LE(r.bessel_f, c * c / b + 1e-9);
  }
}

TEST(ExplicitSplit, EqualizesWeightedNorms) {
  const auto sys = random_gaussian_system(8, 3, 4);
  const auto r = explicit_split(sys);
  for (std::size_t j = 0; j < 8; ++j) {
    const double g = std::sqrt(sys.x().norm(j) * sys.f().norm(j));
    EXPECT_NEAR(r.d[j] * sys.x().norm(j), g, 1e-14 * g);
    EXPECT_NEAR(sys.f().norm(j) / r.d[j], g, 1e-14 * g);
  }
}

TEST(ExplicitSplit, DropsZeroPairsAndAbsorbsSymbol) {
  Matrix x(4, 2), f(4, 2);
  x(0, 0) = 1; f(0, 0) = 2;
  x(1, 1) = 3; f(1, 1) = 1;
  x(2, 0) = 1;             // f_2 = 0
  x(3, 1) = 1; f(3, 0) = 1;  // symbol 0
  const MultiplierSystem sys(Frame(x), Frame(f), {1.0, -2.0, 1.0, 0.0});
  const auto r = explicit_split(sys);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(r.d.size(), 2u);
  EXPECT_NEAR(r.d[0], std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.d[1], std::sqrt(2.0 / 3.0), 1e-15);
  for (double d : r.d) EXPECT_GT(d, 0.0);
}

TEST(ExplicitSplit, EmptyAfterDroppingIsAnError) {
  const MultiplierSystem sys(Frame(Matrix(2, 2)), Frame(Matrix::identity(2)));
  EXPECT_THROW(explicit_split(sys), precondition_error);
}

TEST(OptimalSplit, ExampleBasisPair) {
  for (std::size_t n : {2u, 4u, 9u}) {
    const auto r = optimal_split(example_basis_pair(n));
    EXPECT_NEAR(r.objective, std::sqrt(static_cast<double>(n)), 1e-6);
    EXPECT_TRUE(r.converged);
  }
}

TEST(OptimalSplit, OrthonormalBasis) {
  const Frame onb(Matrix::identity(3));
  const auto r = optimal_split(MultiplierSystem(onb, onb));
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  for (double d : r.d) EXPECT_NEAR(d, 1.0, 1e-6);
}

TEST(OptimalSplit, MatchesLogGridSearch) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto sys = random_gaussian_system(3, 2, seed);
    const double grid = oracle::grid_search_split(sys);
    const auto r = optimal_split(sys);
    EXPECT_NEAR(r.objective, grid, 1e-3 * grid) << "seed " << seed;
    EXPECT_LE(r.objective, grid * (1 + 1e-9));
  }
}

TEST(OptimalSplit, ReportedBoundsMatchWeightedOperators) {
  const auto sys = random_gaussian_system(6, 3, 8);
  const auto r = optimal_split(sys);
  std::vector<double> t(6), inv(6);
  for (std::size_t j = 0; j < 6; ++j) {
    t[j] = r.d[j] * r.d[j];
    inv[j] = 1.0 / t[j];
  }
  EXPECT_NEAR(r.bessel_x, oracle::eig3(weighted_frame_operator(sys.x(), t))[0], 1e-10);
  EXPECT_NEAR(r.bessel_f, oracle::eig3(weighted_frame_operator(sys.f(), inv))[0], 1e-10);
  EXPECT_EQ(r.objective, std::max(r.bessel_x, r.bessel_f));
}

TEST(OptimalSplit, CertifiedGap) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sys = random_gaussian_system(2 + seed % 7, 1 + seed % 4, seed);
    const auto r = optimal_split(sys);
    ASSERT_TRUE(r.lower_certificate.has_value());
    EXPECT_LE(*r.lower_certificate, r.objective + 1e-12);
    EXPECT_TRUE(r.converged) << "seed " << seed << " gap " << r.gap.value_or(-1);
  }
}

TEST(OptimalSplit, BudgetExhaustionIsReportedNotThrown) {
  OptimalSplitOptions opt;
  opt.max_iters = 1;
  opt.subgradient_iters = 1;
  opt.tol = 1e-15;
  const auto r = optimal_split(random_gaussian_system(8, 4, 3), opt);
  EXPECT_GT(r.objective, 0.0);
  ASSERT_TRUE(r.gap.has_value());
  if (!r.converged) {
    EXPECT_GT(*r.gap, opt.tol);
  }
}

TEST(OptimalSplit, RejectsBadTolerance) {
  EXPECT_THROW(optimal_split(example_basis_pair(2), 0.0, 10), precondition_error);
}

TEST(TraceLowerBound, Examples) {
  const Frame h = harmonic_funtf(6, 3);
  const MultiplierSystem pair(h, h);
  EXPECT_NEAR(trace_lower_bound(pair), 2.0, 1e-12);
  const auto r = optimal_split(pair);
  EXPECT_NEAR(r.objective, 2.0, 1e-12);
  for (double d : r.d) EXPECT_NEAR(d, 1.0, 1e-6);

  const Frame onb(Matrix::identity(3));
  EXPECT_NEAR(trace_lower_bound(MultiplierSystem(onb, onb)), 1.0, 1e-14);
}

TEST(TraceLowerBound, OptimizerStaysAbove) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t m = 1 + seed % 4;
    const auto sys = random_equalnorm_pair(m + seed % 5, m, seed);
    const double a = trace_lower_bound(sys);
    EXPECT_GE(optimal_split(sys).objective, a - 1e-8);
    EXPECT_GE(explicit_split(sys).objective, a - 1e-8);
    EXPECT_GE(unit_split(sys).objective, a - 1e-8);
  }
}

TEST(TraceLowerBound, Preconditions) {
  EXPECT_THROW(trace_lower_bound(random_gaussian_system(4, 2, 1)), precondition_error);
  const Frame onb(Matrix::identity(2));
  EXPECT_THROW(trace_lower_bound(MultiplierSystem(onb, onb, {1.0, 0.5})), precondition_error);
  // equal norms but neither family spans
  const Frame line(std::vector<Vector>{{1.0, 0.0}, {1.0, 0.0}});
  EXPECT_THROW(trace_lower_bound(MultiplierSystem(line, line)), precondition_error);
}

TEST(UnitSplit, Examples) {
  const auto pair = tight_equinorm_pair(7, 3, 2);
  EXPECT_NEAR(unit_split(pair).objective, 7.0 / 3.0, 1e-10);
  EXPECT_NEAR(unit_split(example_basis_pair(9)).objective, 9.0, 1e-12);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sys = random_gaussian_system(5, 2, seed);
    EXPECT_GE(unit_split(sys).objective, optimal_split(sys).objective - 1e-9);
    for (double d : unit_split(sys).d) EXPECT_EQ(d, 1.0);
  }
}

TEST(SplitProperties, ScaleCovariance) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sys = random_gaussian_system(2 + seed % 6, 1 + seed % 3, seed);
    const double base = optimal_split(sys).objective;
    for (double s : {0.1, 3.0, 40.0})
      EXPECT_NEAR(optimal_split(scaled(sys, s)).objective, base, 1e-8 * base);
  }
}

TEST(SplitProperties, Convexity) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sys = random_gaussian_system(6, 3, seed);
    const SplitProblem prob(sys);
    const CounterRng rng(seed);
    for (std::uint64_t k = 0; k < 20; ++k) {
      const CounterRng draw = rng.fork(k);
      std::vector<double> t(6), u(6), mid(6);
      const double theta = draw.uniform(99);
      for (std::size_t j = 0; j < 6; ++j) {
        t[j] = std::exp(draw.uniform(j, -3.0, 3.0));
        u[j] = std::exp(draw.uniform(10 + j, -3.0, 3.0));
        mid[j] = theta * t[j] + (1 - theta) * u[j];
      }
      EXPECT_LE(prob.objective(mid),
                theta * prob.objective(t) + (1 - theta) * prob.objective(u) + 1e-10);
    }
  }
}

TEST(SplitProperties, ExampleRatioUnitOverConstant) {
  for (std::size_t n : {2u, 4u, 8u}) {
    const auto sys = example_basis_pair(n);
    const double c = exact_constant(sys).value;
    EXPECT_NEAR(unit_split(sys).objective / c, std::sqrt(static_cast<double>(n)), 1e-10);
    EXPECT_NEAR(optimal_split(sys).objective, c, 1e-6);
  }
}
