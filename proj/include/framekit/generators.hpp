#ifndef FRAMEKIT_GENERATORS_HPP
#define FRAMEKIT_GENERATORS_HPP

// Deterministic frame and multiplier-system constructors. All randomness
// comes from CounterRng, so a (kind, n, m, seed, scale) tuple fixes the
// output bit for bit.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "framekit/error.hpp"
#include "framekit/frame.hpp"
#include "framekit/linalg.hpp"
#include "framekit/rng.hpp"

namespace framekit {

/// Real harmonic unit-norm tight frame of n vectors in R^m, frame bound n/m.
/// Vector k has coordinates sqrt(2/m)·(cos(2πjk/n), sin(2πjk/n)) for
/// frequencies j = 1..⌊m/2⌋, plus the constant 1/sqrt(m) when m is odd.
/// For n = m (where the top frequency would alias) the standard basis is
/// returned. Tightness is verified before returning.
inline Frame harmonic_funtf(std::size_t n, std::size_t m) {
  if (m < 1) throw precondition_error("harmonic_funtf: m must be >= 1");
  if (n < m) throw precondition_error("harmonic_funtf: need n >= m, no unit-norm tight frame exists otherwise");
  Matrix a(n, m);
  if (n == m) {
    for (std::size_t k = 0; k < n; ++k) a(k, k) = 1.0;
  } else {
    const std::size_t pairs = m / 2;
    const bool odd = m % 2 == 1;
    const double amp = std::sqrt(2.0 / static_cast<double>(m));
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t col = 0;
      if (odd) a(k, col++) = 1.0 / std::sqrt(static_cast<double>(m));
      for (std::size_t j = 1; j <= pairs; ++j) {
        // reduce j*k mod n first so the angle stays accurate for large n
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                             static_cast<double>(n);
        a(k, col++) = amp * std::cos(angle);
        a(k, col++) = amp * std::sin(angle);
      }
    }
  }
  Frame frame(std::move(a));
  Matrix expected = Matrix::identity(m);
  for (double& v : expected.data()) v *= static_cast<double>(n) / static_cast<double>(m);
  if (max_abs_diff(frame_operator(frame), expected) > 1e-10)
    throw numerical_error("harmonic_funtf: constructed frame is not tight");
  return frame;
}

/// n i.i.d. standard Gaussian vectors in R^m times `scale`.
inline Frame random_gaussian_frame(std::size_t n, std::size_t m, std::uint64_t seed,
                                   double scale = 1.0) {
  if (n < 1 || m < 1) throw precondition_error("random_gaussian_frame: n, m must be >= 1");
  const CounterRng rng(seed);
  Matrix a(n, m);
  for (std::size_t j = 0; j < n; ++j) {
    // redraw the (probability zero) all-zero vector
    for (std::uint64_t attempt = 0;; ++attempt) {
      const CounterRng row = rng.fork(j + attempt * n);
      double sq = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        a(j, c) = scale * row.normal(c);
        sq += a(j, c) * a(j, c);
      }
      if (sq > 0.0) break;
    }
  }
  return Frame(std::move(a));
}

/// Two independent Gaussian frames with unit symbol.
inline MultiplierSystem random_gaussian_system(std::size_t n, std::size_t m, std::uint64_t seed,
                                               double scale = 1.0) {
  const CounterRng root(seed);
  return MultiplierSystem(random_gaussian_frame(n, m, root.fork(0).bits(0), scale),
                          random_gaussian_frame(n, m, root.fork(1).bits(0), scale));
}

/// x_j = e_j, f_j = e_1 in R^n, unit symbol.
inline MultiplierSystem example_basis_pair(std::size_t n) {
  if (n < 1) throw precondition_error("example_basis_pair: n must be >= 1");
  Matrix x = Matrix::identity(n);
  Matrix f(n, n);
  for (std::size_t j = 0; j < n; ++j) f(j, 0) = 1.0;
  return MultiplierSystem(Frame(std::move(x)), Frame(std::move(f)));
}

/// Gaussian X and F with f_j rescaled to ‖f_j‖ = ‖x_j‖; unit symbol.
inline MultiplierSystem random_equalnorm_pair(std::size_t n, std::size_t m, std::uint64_t seed) {
  auto sys = random_gaussian_system(n, m, seed);
  Matrix f = sys.f().analysis();
  for (std::size_t j = 0; j < n; ++j) {
    const double ratio = sys.x().norm(j) / sys.f().norm(j);
    for (double& v : f.row(j)) v *= ratio;
  }
  return MultiplierSystem(sys.x(), Frame(std::move(f)));
}

/// Haar-ish random orthogonal matrix: Gram-Schmidt (applied twice) on a
/// Gaussian matrix.
inline Matrix random_orthogonal(std::size_t m, const CounterRng& rng) {
  Matrix q(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    const CounterRng row = rng.fork(r);
    for (std::uint64_t attempt = 0;; ++attempt) {
      for (std::size_t c = 0; c < m; ++c) q(r, c) = row.normal(attempt * m + c);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t p = 0; p < r; ++p) {
          const double proj = dot<double>(q.row(r), q.row(p));
          for (std::size_t c = 0; c < m; ++c) q(r, c) -= proj * q(p, c);
        }
      const double nr = norm2<double>(q.row(r));
      if (nr > 1e-8) {
        for (double& v : q.row(r)) v /= nr;
        break;
      }
    }
  }
  return q;
}

/// Pair of tight frames with ‖x_j‖ = ‖f_j‖ = scale: two independently
/// rotated, sign-flipped copies of the harmonic frame. Both have frame
/// bound scale²·n/m.
inline MultiplierSystem tight_equinorm_pair(std::size_t n, std::size_t m, std::uint64_t seed,
                                            double scale = 1.0) {
  const Frame h = harmonic_funtf(n, m);
  const CounterRng root(seed);
  auto rotate = [&](std::uint64_t stream) {
    const CounterRng rng = root.fork(stream);
    const Matrix q = random_orthogonal(m, rng.fork(0));
    Matrix a = multiply(h.analysis(), q);
    const CounterRng signs = rng.fork(1);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = scale * signs.sign(j);
      for (double& v : a.row(j)) v *= s;
    }
    return Frame(std::move(a));
  };
  return MultiplierSystem(rotate(0), rotate(1));
}

/// Replaces term j by k_j copies of (x_j, f_j) each scaled by k_j^{-1/2}
/// (symbol copied). Both frame operators and the multiplier are unchanged.
inline MultiplierSystem replicate_rational(const MultiplierSystem& sys,
                                           const std::vector<std::size_t>& k) {
  if (k.size() != sys.n())
    throw precondition_error("replicate_rational: need one multiplicity per term");
  std::size_t total = 0;
  for (std::size_t kj : k) {
    if (kj < 1) throw precondition_error("replicate_rational: multiplicities must be >= 1");
    total += kj;
  }
  Matrix x(total, sys.m()), f(total, sys.m());
  std::vector<double> symbol;
  symbol.reserve(total);
  std::size_t row = 0;
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k[j]));
    for (std::size_t i = 0; i < k[j]; ++i, ++row) {
      for (std::size_t c = 0; c < sys.m(); ++c) {
        x(row, c) = s * sys.x().vector(j)[c];
        f(row, c) = s * sys.f().vector(j)[c];
      }
      symbol.push_back(sys.symbol()[j]);
    }
  }
  return MultiplierSystem(Frame(std::move(x)), Frame(std::move(f)), std::move(symbol));
}

enum class GeneratorKind {
  harmonic_funtf,
  random_gaussian,
  example_basis_pair,
  random_equalnorm_pair,
  tight_equinorm_pair,
  replicated,
};

inline constexpr std::string_view generator_kind_names[] = {
    "harmonic_funtf",        "random_gaussian",     "example_basis_pair",
    "random_equalnorm_pair", "tight_equinorm_pair", "replicated",
};

inline std::string_view to_string(GeneratorKind k) {
  return generator_kind_names[static_cast<std::size_t>(k)];
}

inline GeneratorKind parse_generator_kind(std::string_view s) {
  for (std::size_t i = 0; i < std::size(generator_kind_names); ++i)
    if (generator_kind_names[i] == s) return static_cast<GeneratorKind>(i);
  throw precondition_error("unknown generator kind '" + std::string(s) + "'");
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::random_gaussian;
  std::size_t n = 1;
  std::size_t m = 1;
  std::uint64_t seed = 0;
  double scale = 1.0;
};

using Generated = std::variant<Frame, MultiplierSystem>;

inline Generated generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::harmonic_funtf: {
      if (spec.scale == 1.0) return harmonic_funtf(spec.n, spec.m);
      Matrix a = harmonic_funtf(spec.n, spec.m).analysis();
      for (double& v : a.data()) v *= spec.scale;
      return Frame(std::move(a));
    }
    case GeneratorKind::random_gaussian:
      return random_gaussian_system(spec.n, spec.m, spec.seed, spec.scale);
    case GeneratorKind::example_basis_pair:
      return example_basis_pair(spec.n);
    case GeneratorKind::random_equalnorm_pair:
      return random_equalnorm_pair(spec.n, spec.m, spec.seed);
    case GeneratorKind::tight_equinorm_pair:
      return tight_equinorm_pair(spec.n, spec.m, spec.seed, spec.scale);
    case GeneratorKind::replicated: {
      // random equal-norm pair with multiplicities drawn from {1, 2, 3}
      auto base = random_equalnorm_pair(spec.n, spec.m, spec.seed);
      const CounterRng rng = CounterRng(spec.seed).fork(7);
      std::vector<std::size_t> k(spec.n);
      for (std::size_t j = 0; j < spec.n; ++j) k[j] = 1 + rng.bits(j) % 3;
      return replicate_rational(base, k);
    }
  }
  throw precondition_error("generate: unhandled generator kind");
}

}  // namespace framekit

#endif  // FRAMEKIT_GENERATORS_HPP
