#ifndef FRAMEKIT_WEIGHT_SPLIT_HPP
#define FRAMEKIT_WEIGHT_SPLIT_HPP

// Weight splittings of a multiplier: choose d_j > 0 so that both (d_j x_j)
// and (d_j⁻¹ m_j f_j) have small Bessel bounds. The multiplier itself does
// not depend on d.
//
// The optimizer works with t_j = d_j² and the objective
//
//   g(t) = max{ λ₁(Σ t_j x_j x_jᵀ), λ₁(Σ t_j⁻¹ f_j f_jᵀ) },
//
// which is convex on t > 0. For any density matrices P, Q (PSD, trace 1)
// Cauchy-Schwarz gives
//
//   g(t) ≥ sqrt(Σ t_j x_jᵀPx_j · Σ t_j⁻¹ f_jᵀQf_j) ≥ Σ_j sqrt(x_jᵀPx_j · f_jᵀQf_j),
//
// so every (P, Q) certifies a lower bound on min g, and the bound is tight
// at the optimum. That certificate is what `gap` reports.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "framekit/error.hpp"
#include "framekit/frame.hpp"
#include "framekit/linalg.hpp"

namespace framekit {

enum class SplitMethod { explicit_weights, optimal, unit };

inline const char* to_string(SplitMethod m) {
  switch (m) {
    case SplitMethod::explicit_weights: return "explicit";
    case SplitMethod::optimal: return "optimal";
    case SplitMethod::unit: return "unit";
  }
  return "?";
}

struct SplitResult {
  std::vector<double> d;             // weight per retained term
  std::vector<std::size_t> indices;  // original index of each retained term
  double bessel_x = 0.0;             // λ₁ of Σ d_j² x_j x_jᵀ
  double bessel_f = 0.0;             // λ₁ of Σ d_j⁻² m_j² f_j f_jᵀ
  double objective = 0.0;            // max(bessel_x, bessel_f)
  SplitMethod method = SplitMethod::unit;
  std::optional<double> lower_certificate;  // proven lower bound on the optimum
  std::optional<double> gap;                // objective - lower_certificate
  int iterations = 0;
  bool converged = true;
};

/// The min-max problem restricted to terms with x_j ≠ 0 and m_j f_j ≠ 0,
/// with the symbol folded into F.
class SplitProblem {
 public:
  explicit SplitProblem(const MultiplierSystem& sys) {
    const auto abs = sys.absorbed();
    std::vector<Vector> xs, fs;
    for (std::size_t j = 0; j < sys.n(); ++j) {
      if (abs.x().norm(j) > 0.0 && abs.f().norm(j) > 0.0) {
        indices_.push_back(j);
        xs.emplace_back(abs.x().vector(j).begin(), abs.x().vector(j).end());
        fs.emplace_back(abs.f().vector(j).begin(), abs.f().vector(j).end());
      }
    }
    if (indices_.empty())
      throw precondition_error("weight split: no term has nonzero x_j and m_j f_j");
    x_.emplace(xs);
    f_.emplace(fs);
  }

  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t dim() const noexcept { return x_->m(); }
  const Frame& x() const { return *x_; }
  const Frame& f() const { return *f_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  Matrix x_operator(std::span<const double> t) const { return weighted_frame_operator(*x_, t); }
  Matrix f_operator(std::span<const double> t) const {
    std::vector<double> inv(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) inv[j] = 1.0 / t[j];
    return weighted_frame_operator(*f_, inv);
  }

  struct Branches {
    double x = 0.0;
    double f = 0.0;
    double objective() const { return std::max(x, f); }
  };

  Branches evaluate(std::span<const double> t) const {
    return {psd_top_eigenvalue(x_operator(t)), psd_top_eigenvalue(f_operator(t))};
  }

  double objective(std::span<const double> t) const { return evaluate(t).objective(); }

  /// t_j = ‖f_j‖ / ‖x_j‖, which equalizes ‖d_j x_j‖ and ‖d_j⁻¹ f_j‖.
  std::vector<double> balanced_weights() const {
    std::vector<double> t(size());
    for (std::size_t j = 0; j < size(); ++j) t[j] = f_->norm(j) / x_->norm(j);
    return t;
  }

  /// Σ_j sqrt(x_jᵀ P x_j · f_jᵀ Q f_j).
  double dual_value(const Matrix& p, const Matrix& q) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
      acc += std::sqrt(std::max(0.0, quad(p, x_->vector(j))) * std::max(0.0, quad(q, f_->vector(j))));
    return acc;
  }

  static double quad(const Matrix& p, std::span<const double> v) {
    return dot<double>(v, apply<double>(p, v));
  }

 private:
  std::vector<std::size_t> indices_;
  std::optional<Frame> x_;
  std::optional<Frame> f_;
};

namespace detail {

inline SplitResult make_split(const SplitProblem& prob, std::span<const double> t,
                              SplitMethod method) {
  SplitResult r;
  r.method = method;
  r.indices = prob.indices();
  r.d.resize(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) r.d[j] = std::sqrt(t[j]);
  const auto b = prob.evaluate(t);
  r.bessel_x = b.x;
  r.bessel_f = b.f;
  r.objective = b.objective();
  return r;
}

// Average of the eigenvector projectors whose eigenvalues lie within
// `rel` of the top one, mixed with a little of I/M so no quadratic form
// vanishes.
inline Matrix top_projector(const SymmetricEigen<double>& eig, double rel, double mix) {
  const std::size_t m = eig.values.size();
  const double top = eig.values.front();
  std::size_t k = 0;
  while (k < m && eig.values[k] >= top - rel * std::abs(top)) ++k;
  k = std::max<std::size_t>(k, 1);
  Matrix p(m, m);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        p(a, b) += eig.vectors(a, c) * eig.vectors(b, c) / static_cast<double>(k);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      p(a, b) = (1.0 - mix) * p(a, b) + (a == b ? mix / static_cast<double>(m) : 0.0);
  return p;
}

inline Matrix lerp(const Matrix& a, const Matrix& b, double s) {
  Matrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - s) * o[i] + s * bd[i];
  return out;
}

inline Matrix outer(std::span<const double> v) {
  Matrix p(v.size(), v.size());
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = 0; b < v.size(); ++b) p(a, b) = v[a] * v[b];
  return p;
}

struct DualCertificate {
  double value = 0.0;
  Matrix p, q;
};

// Lower bound on min g from spectral projectors at t, improved by a few
// Frank-Wolfe steps on the concave dual function.
inline DualCertificate dual_certificate(const SplitProblem& prob, std::span<const double> t,
                                        int fw_steps) {
  const auto ex = psd_eigen(prob.x_operator(t));
  const auto ef = psd_eigen(prob.f_operator(t));
  DualCertificate best;
  best.value = -1.0;
  for (double rel : {0.0, 1e-9, 1e-6, 1e-3, 1e-2, 1e-1}) {
    for (double mix : {0.0, 1e-6, 1e-3}) {
      Matrix p = top_projector(ex, rel, mix);
      Matrix q = top_projector(ef, rel, mix);
      const double v = prob.dual_value(p, q);
      if (v > best.value) best = {v, std::move(p), std::move(q)};
    }
  }

  const std::size_t n = prob.size();
  Matrix p = best.p, q = best.q;
  {
    // keep the Frank-Wolfe iterates strictly inside the spectraplex
    const std::size_t m = prob.dim();
    Matrix eye = Matrix::identity(m);
    for (double& e : eye.data()) e /= static_cast<double>(m);
    p = lerp(p, eye, 1e-9);
    q = lerp(q, eye, 1e-9);
  }
  for (int step = 0; step < fw_steps; ++step) {
    std::vector<double> a(n), b(n), wx(n), wf(n);
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = std::max(SplitProblem::quad(p, prob.x().vector(j)), 1e-300);
      b[j] = std::max(SplitProblem::quad(q, prob.f().vector(j)), 1e-300);
      wx[j] = 0.5 * std::sqrt(b[j] / a[j]);
      wf[j] = 0.5 * std::sqrt(a[j] / b[j]);
    }
    const auto gx = psd_eigen(weighted_frame_operator(prob.x(), wx));
    const auto gf = psd_eigen(weighted_frame_operator(prob.f(), wf));
    const Matrix sp = outer(gx.vectors.column(0));
    const Matrix sq = outer(gf.vectors.column(0));
    // golden-section line search on the concave restriction
    auto along = [&](double s) { return prob.dual_value(lerp(p, sp, s), lerp(q, sq, s)); };
    double lo = 0.0, hi = 1.0;
    constexpr double phi = 0.6180339887498949;
    double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
    double v1 = along(m1), v2 = along(m2);
    for (int it = 0; it < 40; ++it) {
      if (v1 < v2) {
        lo = m1; m1 = m2; v1 = v2; m2 = lo + phi * (hi - lo); v2 = along(m2);
      } else {
        hi = m2; m2 = m1; v2 = v1; m1 = hi - phi * (hi - lo); v1 = along(m1);
      }
    }
    const double s = 0.5 * (lo + hi);
    p = lerp(p, sp, s);
    q = lerp(q, sq, s);
    const double v = prob.dual_value(p, q);
    if (v > best.value) best = {v, p, q};
  }
  return best;
}

// Minimizer of the Lagrangian for the dual pair: t_j = sqrt(f_jᵀQf_j / x_jᵀPx_j).
inline std::vector<double> recover_weights(const SplitProblem& prob, const Matrix& p,
                                           const Matrix& q, double floor) {
  std::vector<double> t(prob.size());
  for (std::size_t j = 0; j < prob.size(); ++j) {
    const double a = SplitProblem::quad(p, prob.x().vector(j));
    const double b = SplitProblem::quad(q, prob.f().vector(j));
    t[j] = (a > 0.0 && b > 0.0) ? std::max(std::sqrt(b / a), floor) : std::numeric_limits<double>::quiet_NaN();
  }
  return t;
}

}  // namespace detail

/// d_j = ‖x_j‖^{-1/2} ‖m_j f_j‖^{1/2}. Both weighted Bessel bounds are at
/// most C² / min_j ‖x_j‖‖m_j f_j‖ for any unconditionality constant C.
inline SplitResult explicit_split(const MultiplierSystem& sys) {
  const SplitProblem prob(sys);
  return detail::make_split(prob, prob.balanced_weights(), SplitMethod::explicit_weights);
}

/// d = 1: the raw Bessel bounds of X and (m_j f_j).
inline SplitResult unit_split(const MultiplierSystem& sys) {
  const auto abs = sys.absorbed();
  SplitResult r;
  r.method = SplitMethod::unit;
  r.d.assign(sys.n(), 1.0);
  r.indices.resize(sys.n());
  for (std::size_t j = 0; j < sys.n(); ++j) r.indices[j] = j;
  r.bessel_x = bessel_bound(abs.x());
  r.bessel_f = bessel_bound(abs.f());
  r.objective = std::max(r.bessel_x, r.bessel_f);
  return r;
}

struct OptimalSplitOptions {
  double tol = 1e-9;             // stop once objective - certificate <= tol
  int max_iters = 20000;         // total iteration budget of both phases
  int subgradient_iters = 1000;  // budget of the subgradient phase
  int certify_every = 50;        // subgradient iterations between certificates
  int fw_steps = 30;             // Frank-Wolfe steps per certificate
};

namespace detail {

// Log-sum-exp smoothing of g over the joint spectrum of both branches,
// in log-weights u (t = t0 ⊙ exp(u)):
//
//   g_μ(u) = μ log Σ_k (exp(α_k/μ) + exp(β_k/μ)),  g ≤ g_μ ≤ g + μ log 2M.
//
// Convex in u. The softmax weights define densities P̃ (mass θ on the X
// branch) and Q̃ (mass 1-θ), and ∂g_μ/∂u_j = t_j x_jᵀP̃x_j - f_jᵀQ̃f_j / t_j.
struct Smoothed {
  double value = 0.0;
  double exact = 0.0;  // g at the same point
  std::vector<double> grad;
  Matrix p, q;  // normalized to trace 1
};

inline Smoothed smoothed_objective(const SplitProblem& prob, std::span<const double> t0,
                                   std::span<const double> u, double mu) {
  const std::size_t n = prob.size();
  const std::size_t m = prob.dim();
  std::vector<double> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = t0[j] * std::exp(u[j]);
  const auto ex = psd_eigen(prob.x_operator(t));
  const auto ef = psd_eigen(prob.f_operator(t));
  const double top = std::max(ex.values.front(), ef.values.front());

  Smoothed s;
  s.exact = top;
  s.p = Matrix(m, m);
  s.q = Matrix(m, m);
  double zx = 0.0, zf = 0.0;
  auto accumulate = [&](const SymmetricEigen<double>& e, Matrix& dst, double& z) {
    for (std::size_t k = 0; k < m; ++k) {
      const double w = std::exp((e.values[k] - top) / mu);
      if (w == 0.0) continue;
      z += w;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) dst(a, b) += w * e.vectors(a, k) * e.vectors(b, k);
    }
  };
  accumulate(ex, s.p, zx);
  accumulate(ef, s.q, zf);
  const double z = zx + zf;
  s.value = top + mu * std::log(z);
  s.grad.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = SplitProblem::quad(s.p, prob.x().vector(j)) / z;
    const double b = SplitProblem::quad(s.q, prob.f().vector(j)) / z;
    s.grad[j] = t[j] * a - b / t[j];
  }
  if (zx > 0.0)
    for (double& v : s.p.data()) v /= zx;
  if (zf > 0.0)
    for (double& v : s.q.data()) v /= zf;
  return s;
}

// BFGS on the smoothed objective with Armijo backtracking.
// Returns the number of iterations used.
inline int minimize_smoothed(const SplitProblem& prob, std::span<const double> t0,
                             std::vector<double>& u, double mu, int budget,
                             const std::function<void(const Smoothed&, std::span<const double>)>& observe) {
  const std::size_t n = u.size();
  Smoothed cur = smoothed_objective(prob, t0, u, mu);
  observe(cur, u);
  Matrix h = Matrix::identity(n);
  int it = 0;
  for (; it < budget; ++it) {
    double gnorm = 0.0;
    for (double g : cur.grad) gnorm += g * g;
    if (std::sqrt(gnorm) <= 1e-14 * std::max(1.0, cur.value)) break;

    std::vector<double> dir(n, 0.0);
    double slope = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) dir[a] -= h(a, b) * cur.grad[b];
      slope += dir[a] * cur.grad[a];
    }
    if (slope >= 0.0) {  // lost descent; reset to steepest descent
      h = Matrix::identity(n);
      for (std::size_t a = 0; a < n; ++a) dir[a] = -cur.grad[a];
      slope = -gnorm;
    }
    double step = 1.0;
    std::vector<double> trial(n);
    Smoothed next;
    bool accepted = false;
    for (int back = 0; back < 60; ++back, step *= 0.5) {
      for (std::size_t a = 0; a < n; ++a) trial[a] = u[a] + step * dir[a];
      next = smoothed_objective(prob, t0, trial, mu);
      if (next.value <= cur.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    observe(next, trial);

    std::vector<double> sv(n), yv(n);
    double sy = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      sv[a] = trial[a] - u[a];
      yv[a] = next.grad[a] - cur.grad[a];
      sy += sv[a] * yv[a];
    }
    if (sy > 1e-300) {
      std::vector<double> hy(n, 0.0);
      double yhy = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) hy[a] += h(a, b) * yv[b];
        yhy += yv[a] * hy[a];
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          h(a, b) += (sy + yhy) * sv[a] * sv[b] / (sy * sy) - (hy[a] * sv[b] + sv[a] * hy[b]) / sy;
    }
    u = trial;
    const double improvement = cur.value - next.value;
    cur = std::move(next);
    if (improvement <= 1e-16 * std::max(1.0, std::abs(cur.value))) break;
  }
  return it + 1;
}

}  // namespace detail

/// Minimizes g(t) = max{λ₁(Σ t_j x_j x_jᵀ), λ₁(Σ t_j⁻¹ f_j f_jᵀ)}.
///
/// Phase 1 is projected subgradient descent warm-started from the explicit
/// split: variables are scaled by the warm start (t = t0 ⊙ u) so the
/// iteration is unchanged when x_j ← s x_j, f_j ← f_j / s; steps are s0/√k
/// along the normalized subgradient with s0 = g(t0)/‖∂g(t0)‖, and when both
/// branches are within 1e-12 the two subgradients are averaged.
///
/// Phase 2 runs only if the certified gap is still above tol: BFGS on the
/// log-sum-exp smoothing in log-weights, with the smoothing width shrunk by
/// 10x per stage. Every stage's densities give a dual certificate and a
/// recovered primal point. Returns the best iterate seen.
inline SplitResult optimal_split(const MultiplierSystem& sys, const OptimalSplitOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw precondition_error("optimal_split: tol must be positive");
  if (opt.max_iters < 0) throw precondition_error("optimal_split: max_iters must be >= 0");
  const SplitProblem prob(sys);
  const std::size_t n = prob.size();
  const std::size_t m = prob.dim();
  constexpr double t_floor = 1e-12;

  const std::vector<double> t0 = prob.balanced_weights();
  std::vector<double> u(n, 1.0), t = t0;
  std::vector<double> u_floor(n);
  for (std::size_t j = 0; j < n; ++j) u_floor[j] = t_floor / t0[j];

  std::vector<double> best_t = t0;
  double best = prob.objective(t0);
  double certificate = 0.0;
  int iterations = 0;

  auto offer = [&](const std::vector<double>& cand) {
    if (std::any_of(cand.begin(), cand.end(), [](double v) { return !(v > 0.0) || !std::isfinite(v); }))
      return;
    const double g = prob.objective(cand);
    if (g < best) {
      best = g;
      best_t = cand;
    }
  };
  auto certify_from = [&](const Matrix& p, const Matrix& q) {
    certificate = std::max(certificate, prob.dual_value(p, q));
    offer(detail::recover_weights(prob, p, q, t_floor));
  };
  auto certify = [&] {
    auto cert = detail::dual_certificate(prob, best_t, opt.fw_steps);
    certify_from(cert.p, cert.q);
  };
  auto done = [&] { return best - certificate <= opt.tol; };

  certify();
  const int sub_budget = std::min(opt.subgradient_iters, opt.max_iters);
  double s0 = 0.0;
  std::vector<double> sub(n);
  for (int k = 1; k <= sub_budget && !done(); ++k) {
    iterations = k;
    for (std::size_t j = 0; j < n; ++j) t[j] = t0[j] * u[j];
    const auto ex = psd_eigen(prob.x_operator(t));
    const auto ef = psd_eigen(prob.f_operator(t));
    const double lx = ex.values.front();
    const double lf = ef.values.front();
    const double g = std::max(lx, lf);
    if (g < best) {
      best = g;
      best_t = t;
    }

    const double tie = 1e-12 * std::max(1.0, g);
    const double wx = lx >= lf - tie ? 1.0 : 0.0;
    const double wf = lf >= lx - tie ? 1.0 : 0.0;
    const double scale = 1.0 / (wx + wf);
    double sub_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double gj = 0.0;
      if (wx > 0.0) {
        double c = 0.0;
        for (std::size_t a = 0; a < m; ++a) c += ex.vectors(a, 0) * prob.x().vector(j)[a];
        gj += c * c;
      }
      if (wf > 0.0) {
        double c = 0.0;
        for (std::size_t a = 0; a < m; ++a) c += ef.vectors(a, 0) * prob.f().vector(j)[a];
        gj -= c * c / (t[j] * t[j]);
      }
      sub[j] = scale * gj * t0[j];  // chain rule for t = t0 ⊙ u
      sub_norm += sub[j] * sub[j];
    }
    sub_norm = std::sqrt(sub_norm);
    if (sub_norm == 0.0) break;  // zero subgradient: t is optimal
    if (k == 1) s0 = g / sub_norm;
    const double step = s0 / std::sqrt(static_cast<double>(k));
    for (std::size_t j = 0; j < n; ++j)
      u[j] = std::max(u[j] - step * sub[j] / sub_norm, u_floor[j]);

    if (k % opt.certify_every == 0) certify();
  }

  if (!done()) {
    std::vector<double> lu(n);
    for (std::size_t j = 0; j < n; ++j) lu[j] = std::log(best_t[j] / t0[j]);
    auto observe = [&](const detail::Smoothed& s, std::span<const double> at) {
      if (s.exact < best) {
        best = s.exact;
        for (std::size_t j = 0; j < n; ++j) best_t[j] = t0[j] * std::exp(at[j]);
      }
    };
    const double base = best;
    int budget = opt.max_iters - iterations;
    for (double mu = 1e-2 * base; budget > 0 && !done() && mu >= 1e-14 * base; mu *= 0.1) {
      for (std::size_t j = 0; j < n; ++j) lu[j] = std::log(best_t[j] / t0[j]);
      const int used = detail::minimize_smoothed(prob, t0, lu, mu, budget, observe);
      budget -= used;
      iterations += used;
      const auto s = detail::smoothed_objective(prob, t0, lu, mu);
      certify_from(s.p, s.q);
    }
    if (!done()) certify();
  }

  SplitResult r = detail::make_split(prob, best_t, SplitMethod::optimal);
  r.lower_certificate = certificate;
  r.gap = std::max(0.0, r.objective - certificate);
  r.iterations = iterations;
  r.converged = *r.gap <= opt.tol;
  return r;
}

inline SplitResult optimal_split(const MultiplierSystem& sys, double tol, int max_iters) {
  OptimalSplitOptions opt;
  opt.tol = tol;
  opt.max_iters = max_iters;
  return optimal_split(sys, opt);
}

/// max(λ_M(S_X), λ_M(S_F)) for an equal-norm pair with unimodular symbol.
/// Every split has objective at least this value.
inline double trace_lower_bound(const MultiplierSystem& sys) {
  for (double s : sys.symbol())
    if (std::abs(s) != 1.0)
      throw precondition_error("trace_lower_bound: symbol entries must be +1 or -1");
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const double nx = sys.x().norm(j);
    const double nf = sys.f().norm(j);
    if (std::abs(nx - nf) > 1e-9 * std::max({1.0, nx, nf}))
      throw precondition_error("trace_lower_bound: ||x_j|| != ||f_j|| at j = " +
                               std::to_string(j));
  }
  const double a = std::max(spectral_summary(sys.x()).lower, spectral_summary(sys.f()).lower);
  if (!(a > 0.0))
    throw precondition_error("trace_lower_bound: neither X nor F spans the space");
  return a;
}

}  // namespace framekit

#endif  // FRAMEKIT_WEIGHT_SPLIT_HPP
