#ifndef FRAMEKIT_FRAME_HPP
#define FRAMEKIT_FRAME_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framekit/error.hpp"
#include "framekit/linalg.hpp"

namespace framekit {

/// An ordered list of N vectors in R^M. The vectors are stored as the rows
/// of the N×M analysis matrix, which is therefore always available.
class Frame {
 public:
  explicit Frame(Matrix analysis) : analysis_(std::move(analysis)) {
    if (analysis_.rows() == 0) throw schema_error("frame must contain at least one vector");
    if (analysis_.cols() == 0) throw schema_error("frame dimension must be at least 1");
    for (double v : analysis_.data())
      if (!std::isfinite(v)) throw schema_error("frame contains a non-finite entry");
  }

  explicit Frame(const std::vector<Vector>& vectors) : Frame(pack(vectors)) {}

  std::size_t n() const noexcept { return analysis_.rows(); }
  std::size_t m() const noexcept { return analysis_.cols(); }

  std::span<const double> vector(std::size_t j) const { return analysis_.row(j); }
  double norm(std::size_t j) const { return norm2<double>(vector(j)); }

  std::vector<double> norms() const {
    std::vector<double> out(n());
    for (std::size_t j = 0; j < n(); ++j) out[j] = norm(j);
    return out;
  }

  std::vector<Vector> vectors() const {
    std::vector<Vector> out;
    out.reserve(n());
    for (std::size_t j = 0; j < n(); ++j) out.emplace_back(vector(j).begin(), vector(j).end());
    return out;
  }

  const Matrix& analysis() const noexcept { return analysis_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  static Matrix pack(const std::vector<Vector>& vectors) {
    if (vectors.empty()) throw schema_error("frame must contain at least one vector");
    const std::size_t m = vectors.front().size();
    Matrix a(vectors.size(), m);
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (vectors[j].size() != m)
        throw schema_error("frame vector " + std::to_string(j) + " has dimension " +
                           std::to_string(vectors[j].size()) + ", expected " +
                           std::to_string(m));
      std::copy(vectors[j].begin(), vectors[j].end(), a.row(j).begin());
    }
    return a;
  }

  Matrix analysis_;
};

/// The multiplier x ↦ Σ m_j ⟨x, f_j⟩ x_j, stored as its two frames and symbol.
class MultiplierSystem {
 public:
  MultiplierSystem(Frame x, Frame f, std::vector<double> symbol)
      : x_(std::move(x)), f_(std::move(f)), symbol_(std::move(symbol)) {
    if (x_.n() != f_.n())
      throw schema_error("frames have different lengths: " + std::to_string(x_.n()) +
                         " vs " + std::to_string(f_.n()));
    if (x_.m() != f_.m())
      throw schema_error("frames live in different dimensions: " + std::to_string(x_.m()) +
                         " vs " + std::to_string(f_.m()));
    if (symbol_.size() != x_.n())
      throw schema_error("symbol has length " + std::to_string(symbol_.size()) +
                         ", expected " + std::to_string(x_.n()));
    for (double s : symbol_)
      if (!std::isfinite(s)) throw schema_error("symbol contains a non-finite entry");
  }

  MultiplierSystem(Frame x, Frame f)
      : MultiplierSystem(std::move(x), Frame(f), std::vector<double>(f.n(), 1.0)) {}

  const Frame& x() const noexcept { return x_; }
  const Frame& f() const noexcept { return f_; }
  const std::vector<double>& symbol() const noexcept { return symbol_; }
  std::size_t n() const noexcept { return x_.n(); }
  std::size_t m() const noexcept { return x_.m(); }

  bool unit_symbol() const {
    for (double s : symbol_)
      if (s != 1.0) return false;
    return true;
  }

  /// Same operator with the symbol folded into F (f_j ← m_j f_j, m ← 1).
  MultiplierSystem absorbed() const {
    Matrix fa = f_.analysis();
    for (std::size_t j = 0; j < n(); ++j)
      for (double& v : fa.row(j)) v *= symbol_[j];
    return MultiplierSystem(x_, Frame(std::move(fa)), std::vector<double>(n(), 1.0));
  }

  friend bool operator==(const MultiplierSystem&, const MultiplierSystem&) = default;

 private:
  Frame x_;
  Frame f_;
  std::vector<double> symbol_;
};

/// Row j of the result is x_j, so U x = (⟨x, x_j⟩)_j.
inline Matrix analysis_matrix(const Frame& frame) { return frame.analysis(); }

/// S = Uᵀ U = Σ_j x_j x_jᵀ.
inline Matrix frame_operator(const Frame& frame) { return gram(frame.analysis()); }

/// Frame operator of the weighted sequence (w_j x_j): Σ_j w_j² x_j x_jᵀ,
/// passed as squared weights.
inline Matrix weighted_frame_operator(const Frame& frame, std::span<const double> sq_weights) {
  const std::size_t m = frame.m();
  Matrix s(m, m);
  for (std::size_t j = 0; j < frame.n(); ++j) {
    const double w = sq_weights[j];
    if (w == 0.0) continue;
    auto v = frame.vector(j);
    for (std::size_t a = 0; a < m; ++a) {
      const double va = w * v[a];
      for (std::size_t b = a; b < m; ++b) s(a, b) += va * v[b];
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < a; ++b) s(a, b) = s(b, a);
  return s;
}

/// Optimal Bessel bound of a frame: the largest eigenvalue of S.
inline double bessel_bound(const Frame& frame) {
  return psd_top_eigenvalue(frame_operator(frame));
}

struct SpectralSummary {
  std::vector<double> eigenvalues;  // descending
  double trace = 0.0;
  double bessel = 0.0;  // λ₁
  double lower = 0.0;   // λ_M
  std::optional<double> beta;  // λ₁ M / trace, absent when trace == 0
  bool degenerate = false;     // all-zero frame
  double max_residual = 0.0;   // max_k ‖S v_k − λ_k v_k‖

  double condition_number() const {
    if (lower <= 0.0) return std::numeric_limits<double>::infinity();
    return bessel / lower;
  }
  bool tight(double rel_tol = 1e-8) const {
    return !degenerate && bessel - lower <= rel_tol * bessel;
  }
};

/// Spectrum of the frame operator with the derived frame bounds.
/// Every eigenpair is checked to satisfy ‖S v − λ v‖ ≤ tol·‖S‖_F.
inline SpectralSummary spectral_summary(const Frame& frame, double tol = 1e-10) {
  if (!(tol > 0.0)) throw precondition_error("spectral_summary: tol must be positive");
  const Matrix s = frame_operator(frame);
  const auto eig = psd_eigen(s);
  const double scale = frobenius_norm(s);
  const std::size_t m = frame.m();

  SpectralSummary out;
  out.eigenvalues = eig.values;
  for (std::size_t k = 0; k < m; ++k) {
    const auto v = eig.vectors.column(k);
    const auto sv = apply<double>(s, v);
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = sv[i] - eig.values[k] * v[i];
      r += d * d;
    }
    out.max_residual = std::max(out.max_residual, std::sqrt(r));
  }
  if (out.max_residual > tol * scale)
    throw numerical_error("spectral_summary: eigenpair residual exceeds tolerance");

  for (std::size_t i = 0; i < m; ++i) out.trace += s(i, i);
  out.bessel = eig.values.front();
  out.lower = eig.values.back();
  out.degenerate = out.trace <= 0.0;
  if (!out.degenerate) out.beta = out.bessel * static_cast<double>(m) / out.trace;
  return out;
}

/// M×M matrix of x ↦ Σ_j c_j m_j ⟨x, f_j⟩ x_j, i.e. Σ_j c_j m_j x_j f_jᵀ.
inline Matrix multiplier_matrix(const MultiplierSystem& sys, std::span<const double> coeffs) {
  const std::size_t m = sys.m();
  Matrix t(m, m);
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const double w = coeffs[j] * sys.symbol()[j];
    if (w == 0.0) continue;
    auto xj = sys.x().vector(j);
    auto fj = sys.f().vector(j);
    for (std::size_t a = 0; a < m; ++a) {
      const double xa = w * xj[a];
      for (std::size_t b = 0; b < m; ++b) t(a, b) += xa * fj[b];
    }
  }
  return t;
}

namespace detail {

inline Vector multiplier_combination(const MultiplierSystem& sys, std::span<const double> coeffs,
                                     std::span<const double> x) {
  Vector out(sys.m(), 0.0);
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const double c = coeffs[j] * sys.symbol()[j] * dot<double>(x, sys.f().vector(j));
    if (c == 0.0) continue;
    auto xj = sys.x().vector(j);
    for (std::size_t a = 0; a < sys.m(); ++a) out[a] += c * xj[a];
  }
  return out;
}

inline void require_signs(const MultiplierSystem& sys, std::span<const double> signs,
                          const char* who) {
  if (signs.size() != sys.n())
    throw precondition_error(std::string(who) + ": expected " + std::to_string(sys.n()) +
                             " signs, got " + std::to_string(signs.size()));
  for (double s : signs)
    if (s != 1.0 && s != -1.0)
      throw precondition_error(std::string(who) + ": signs must be +1 or -1");
}

}  // namespace detail

/// Σ_j ε_j m_j ⟨x, f_j⟩ x_j.
inline Vector multiplier_apply(const MultiplierSystem& sys, std::span<const double> signs,
                               std::span<const double> x) {
  detail::require_signs(sys, signs, "multiplier_apply");
  if (x.size() != sys.m())
    throw precondition_error("multiplier_apply: vector has wrong dimension");
  return detail::multiplier_combination(sys, signs, x);
}

}  // namespace framekit

#endif  // FRAMEKIT_FRAME_HPP
