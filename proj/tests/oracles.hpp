#ifndef FRAMEKIT_TESTS_ORACLES_HPP
#define FRAMEKIT_TESTS_ORACLES_HPP

// Reference computations used only by tests. None of these call the
// library's eigensolver or enumeration code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "framekit/frame.hpp"

namespace oracle {

using framekit::Frame;
using framekit::Matrix;
using framekit::MultiplierSystem;

/// Σ_j x_j x_jᵀ by explicit loops over every entry.
inline Matrix outer_product_sum(const Frame& frame) {
  const std::size_t m = frame.m();
  Matrix s(m, m);
  for (std::size_t j = 0; j < frame.n(); ++j)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) s(a, b) += frame.vector(j)[a] * frame.vector(j)[b];
  return s;
}

/// Eigenvalues (descending) of a symmetric 2×2 matrix.
inline std::array<double, 2> eig2(const Matrix& s) {
  const double mean = 0.5 * (s(0, 0) + s(1, 1));
  const double half = 0.5 * (s(0, 0) - s(1, 1));
  const double r = std::hypot(half, s(0, 1));
  return {mean + r, mean - r};
}

/// Eigenvalues (descending) of a symmetric 3×3 matrix as the roots of
/// det(λI − S) = λ³ − c₂λ² + c₁λ − c₀ via the trigonometric cubic formula.
inline std::array<double, 3> eig3(const Matrix& s) {
  const double c2 = s(0, 0) + s(1, 1) + s(2, 2);
  const double c1 = s(0, 0) * s(1, 1) + s(0, 0) * s(2, 2) + s(1, 1) * s(2, 2) - s(0, 1) * s(1, 0) -
                    s(0, 2) * s(2, 0) - s(1, 2) * s(2, 1);
  const double c0 = s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1)) -
                    s(0, 1) * (s(1, 0) * s(2, 2) - s(1, 2) * s(2, 0)) +
                    s(0, 2) * (s(1, 0) * s(2, 1) - s(1, 1) * s(2, 0));
  // λ = y + c2/3 gives the depressed cubic y³ + p y + q = 0
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
  std::array<double, 3> out{shift, shift, shift};
  if (p < 0.0) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) out[k] = shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline Matrix transpose_times(const Matrix& t) {
  Matrix g(t.cols(), t.cols());
  for (std::size_t a = 0; a < t.cols(); ++a)
    for (std::size_t b = 0; b < t.cols(); ++b)
      for (std::size_t k = 0; k < t.rows(); ++k) g(a, b) += t(k, a) * t(k, b);
  return g;
}

/// Spectral norm of a square matrix of order 1, 2 or 3 via closed forms.
inline double closed_form_norm(const Matrix& t) {
  const Matrix g = transpose_times(t);
  switch (t.cols()) {
    case 1: return std::abs(t(0, 0));
    case 2: return std::sqrt(std::max(0.0, eig2(g)[0]));
    case 3: return std::sqrt(std::max(0.0, eig3(g)[0]));
    default: break;
  }
  return std::nan("");
}

/// Spectral norm by power iteration on TᵀT from a fixed dense start.
inline double power_iteration_norm(const Matrix& t, int iters = 20000) {
  const Matrix g = transpose_times(t);
  const std::size_t m = g.rows();
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> w(m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) w[a] += g(a, b) * v[b];
    double nw = 0.0;
    for (double x : w) nw += x * x;
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;
    for (std::size_t a = 0; a < m; ++a) v[a] = w[a] / nw;
    lambda = nw;
  }
  return std::sqrt(lambda);
}

/// Σ_j c_j m_j x_j f_jᵀ built term by term.
inline Matrix multiplier(const MultiplierSystem& sys, const std::vector<double>& c) {
  const std::size_t m = sys.m();
  Matrix t(m, m);
  for (std::size_t j = 0; j < sys.n(); ++j)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        t(a, b) += c[j] * sys.symbol()[j] * sys.x().vector(j)[a] * sys.f().vector(j)[b];
  return t;
}

inline std::vector<double> signs_of(std::uint64_t pattern, std::size_t n) {
  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = (pattern >> j) & 1 ? -1.0 : 1.0;
  return s;
}

/// max over all 2^N sign vectors (no symmetry reduction) of the closed-form
/// norm. Dimension must be at most 3.
inline double unhalved_constant(const MultiplierSystem& sys) {
  double best = 0.0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << sys.n()); ++p)
    best = std::max(best, closed_form_norm(multiplier(sys, signs_of(p, sys.n()))));
  return best;
}

/// 2^{-N} Σ_ε ‖Σ ε_j x_j‖².
inline double parallelogram_mean(const Frame& frame) {
  const std::size_t n = frame.n();
  double acc = 0.0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    const auto s = signs_of(p, n);
    double sq = 0.0;
    for (std::size_t a = 0; a < frame.m(); ++a) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += s[j] * frame.vector(j)[a];
      sq += v * v;
    }
    acc += sq;
  }
  return acc / std::ldexp(1.0, static_cast<int>(n));
}

/// E|Σ δ_j a_j| over all 2^N sign vectors, summed directly.
inline double rademacher_mean_abs(const std::vector<double>& a) {
  const std::size_t n = a.size();
  double acc = 0.0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += ((p >> j) & 1 ? -1.0 : 1.0) * a[j];
    acc += std::abs(s);
  }
  return acc / std::ldexp(1.0, static_cast<int>(n));
}

/// max(λ₁(Σ t_j x_j x_jᵀ), λ₁(Σ t_j⁻¹ m_j² f_j f_jᵀ)) for dimension 2 or 3.
inline double split_objective(const MultiplierSystem& sys, const std::vector<double>& t) {
  const std::size_t m = sys.m();
  Matrix sx(m, m), sf(m, m);
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const double mj2 = sys.symbol()[j] * sys.symbol()[j];
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        sx(a, b) += t[j] * sys.x().vector(j)[a] * sys.x().vector(j)[b];
        sf(a, b) += mj2 / t[j] * sys.f().vector(j)[a] * sys.f().vector(j)[b];
      }
  }
  auto top = [&](const Matrix& s) { return m == 2 ? eig2(s)[0] : eig3(s)[0]; };
  return std::max(top(sx), top(sf));
}

/// Minimum of split_objective over t_j = d_j² ∈ [1e-4, 1e4] by nested
/// golden-section search, one coordinate per level. g is convex in t, and a
/// partial minimum of a convex function is convex, so every level searches
/// a convex (hence unimodal) function.
inline double nested_golden_split(const MultiplierSystem& sys, int iters = 90) {
  const std::size_t n = sys.n();
  std::vector<double> t(n, 1.0);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    if (k == n) return split_objective(sys, t);
    auto at = [&](double v) {
      t[k] = v;
      return level(k + 1);
    };
    double a = 1e-4, b = 1e4;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = at(c), fd = at(d);
    for (int i = 0; i < iters; ++i) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = at(d);
      }
    }
    return std::min(fc, fd);
  };
  return level(0);
}

/// Log-spaced grid of `points` values per axis for d_j ∈ [1e-2, 1e2]
/// (t_j = d_j²). Only locates the basin: the grid spacing alone is far
/// coarser than 1e-3 relative.
inline double log_grid_split(const MultiplierSystem& sys, int points = 60) {
  const std::size_t n = sys.n();
  const double lo = std::log(1e-2), step = (std::log(1e2) - lo) / (points - 1);
  std::vector<int> idx(n, 0);
  std::vector<double> t(n);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t j = 0; j < n; ++j) t[j] = std::exp(2.0 * (lo + step * idx[j]));
    best = std::min(best, split_objective(sys, t));
    std::size_t k = 0;
    while (k < n && ++idx[k] == points) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

/// Reference optimum of the weight split for N ≤ 3: the smaller of the log
/// grid and the nested golden-section value.
inline double grid_search_split(const MultiplierSystem& sys) {
  return std::min(log_grid_split(sys), nested_golden_split(sys));
}

}  // namespace oracle

#endif  // FRAMEKIT_TESTS_ORACLES_HPP
