#ifndef FRAMEKIT_UNCONDITIONALITY_HPP
#define FRAMEKIT_UNCONDITIONALITY_HPP

// Unconditionality constant of a multiplier,
//
//   C = max_{ε ∈ {±1}^N} ‖ Σ_j ε_j m_j ⟨·, f_j⟩ x_j ‖,
//
// computed exactly by sign enumeration or bounded from below by randomized
// search, together with the sign/index-set witness that certifies a lower
// bound on C for equal-norm pairs.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "framekit/error.hpp"
#include "framekit/frame.hpp"
#include "framekit/linalg.hpp"
#include "framekit/rng.hpp"

namespace framekit {

/// Best constant in the ℓ1/ℓ2 Khintchine inequality for Rademacher sums.
inline constexpr double default_k1 = std::numbers::sqrt2 / 2.0;

/// Largest N accepted by exact_constant.
inline constexpr std::size_t default_enumeration_cutoff = 22;

enum class EstimateStatus { exact, lower_bound };

inline const char* to_string(EstimateStatus s) {
  return s == EstimateStatus::exact ? "exact" : "lower_bound";
}

struct UnconditionalityEstimate {
  double value = 0.0;
  EstimateStatus status = EstimateStatus::lower_bound;
  std::vector<double> witness_signs;
  Vector witness_vector;  // unit x with ‖T_ε x‖ = value
  std::uint64_t evaluations = 0;
};

namespace detail {

inline std::vector<double> signs_from_pattern(std::uint64_t pattern, std::size_t n) {
  std::vector<double> s(n, 1.0);
  for (std::size_t j = 1; j < n; ++j)
    if ((pattern >> (j - 1)) & 1U) s[j] = -1.0;
  return s;
}

// T += w · x fᵀ
inline void add_rank_one(Matrix& t, double w, std::span<const double> x,
                         std::span<const double> f) {
  const std::size_t m = t.rows();
  for (std::size_t a = 0; a < m; ++a) {
    const double xa = w * x[a];
    if (xa == 0.0) continue;
    for (std::size_t b = 0; b < m; ++b) t(a, b) += xa * f[b];
  }
}

// Spectral norm of a square matrix via the top eigenvalue of TᵀT.
inline double spectral_norm(const Matrix& t) {
  if (t.rows() == 1) return std::abs(t(0, 0));
  return std::sqrt(psd_top_eigenvalue(gram(t)));
}

inline Vector top_right_singular_vector(const Matrix& t) {
  auto eig = psd_eigen(gram(t));
  Vector v = eig.vectors.column(0);
  // canonical sign: first nonzero component positive
  for (double c : v) {
    if (c == 0.0) continue;
    if (c < 0.0)
      for (double& e : v) e = -e;
    break;
  }
  return v;
}

}  // namespace detail

/// Operator norm of U_Xᵀ D_ε diag(m) U_F.
inline double multiplier_norm(const MultiplierSystem& sys, std::span<const double> signs) {
  detail::require_signs(sys, signs, "multiplier_norm");
  return detail::spectral_norm(multiplier_matrix(sys, signs));
}

struct ExactOptions {
  std::size_t cutoff = default_enumeration_cutoff;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Maximum of multiplier_norm over all sign patterns with ε_1 = +1
/// (ε and -ε give the same norm). Patterns are visited in Gray-code order
/// so each step is a rank-one update; the sign space is split into a fixed
/// set of chunks so the result does not depend on thread scheduling. Ties
/// go to the smallest pattern index.
inline UnconditionalityEstimate exact_constant(const MultiplierSystem& sys,
                                               const ExactOptions& opt = {}) {
  const std::size_t n = sys.n();
  if (n > opt.cutoff || n > 62)
    throw capacity_error("exact_constant: N = " + std::to_string(n) +
                             " exceeds the enumeration cutoff of " +
                             std::to_string(opt.cutoff) + "; use randomized_constant",
                         opt.cutoff);

  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 64);

  struct ChunkBest {
    double value = -1.0;
    std::uint64_t pattern = 0;
  };
  std::vector<ChunkBest> best(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t lo = c * total / chunks;
    const std::uint64_t hi = (c + 1) * total / chunks;
    std::uint64_t pattern = lo ^ (lo >> 1);
    auto signs = detail::signs_from_pattern(pattern, n);
    Matrix t = multiplier_matrix(sys, signs);
    ChunkBest b;
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (i != lo) {
        const unsigned bit = static_cast<unsigned>(std::countr_zero(i));
        const std::size_t j = bit + 1;
        signs[j] = -signs[j];
        pattern ^= std::uint64_t{1} << bit;
        detail::add_rank_one(t, 2.0 * signs[j] * sys.symbol()[j], sys.x().vector(j),
                             sys.f().vector(j));
      }
      const double v = detail::spectral_norm(t);
      if (v > b.value || (v == b.value && pattern < b.pattern)) b = {v, pattern};
    }
    best[c] = b;
  };

  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  if (workers <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t c; (c = next.fetch_add(1)) < chunks;) run_chunk(c);
      });
  }

  ChunkBest winner = best.front();
  for (const auto& b : best)
    if (b.value > winner.value || (b.value == winner.value && b.pattern < winner.pattern))
      winner = b;

  UnconditionalityEstimate out;
  out.status = EstimateStatus::exact;
  out.witness_signs = detail::signs_from_pattern(winner.pattern, n);
  // Recompute at the witness from scratch to shed accumulated rounding.
  const Matrix t = multiplier_matrix(sys, out.witness_signs);
  out.value = detail::spectral_norm(t);
  out.witness_vector = detail::top_right_singular_vector(t);
  out.evaluations = total;
  return out;
}

/// Lower bound on C from `trials` uniform sign draws, each followed by
/// single-coordinate hill climbing (first improvement, passes repeated
/// until no flip helps). Trial t uses the sub-stream fork(t) of `seed`, so
/// more trials only ever add draws.
inline UnconditionalityEstimate randomized_constant(const MultiplierSystem& sys, int trials,
                                                    std::uint64_t seed) {
  if (trials < 1) throw precondition_error("randomized_constant: trials must be >= 1");
  const std::size_t n = sys.n();
  const CounterRng root(seed);

  UnconditionalityEstimate out;
  out.value = -1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const CounterRng rng = root.fork(static_cast<std::uint64_t>(trial));
    std::vector<double> signs(n);
    for (std::size_t j = 0; j < n; ++j) signs[j] = rng.sign(j);
    Matrix t = multiplier_matrix(sys, signs);
    double current = detail::spectral_norm(t);
    ++out.evaluations;

    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t j = 0; j < n; ++j) {
        const double w = -2.0 * signs[j] * sys.symbol()[j];
        if (w == 0.0) continue;
        Matrix candidate = t;
        detail::add_rank_one(candidate, w, sys.x().vector(j), sys.f().vector(j));
        const double v = detail::spectral_norm(candidate);
        ++out.evaluations;
        if (v > current) {
          current = v;
          t = std::move(candidate);
          signs[j] = -signs[j];
          improved = true;
        }
      }
    }
    if (current > out.value) {
      out.value = current;
      out.witness_signs = signs;
    }
  }

  const Matrix t = multiplier_matrix(sys, out.witness_signs);
  out.value = detail::spectral_norm(t);
  out.witness_vector = detail::top_right_singular_vector(t);
  out.status = EstimateStatus::lower_bound;
  return out;
}

/// ‖Σ_j a_j m_j ⟨x, f_j⟩ x_j‖ for |a_j| ≤ 1. Any such vector lies in the
/// convex hull of the ±1-sign images of x, so the result is ≤ C‖x‖.
inline double hull_norm_bound(const MultiplierSystem& sys, std::span<const double> a,
                              std::span<const double> x) {
  if (a.size() != sys.n())
    throw precondition_error("hull_norm_bound: coefficient vector has wrong length");
  if (x.size() != sys.m()) throw precondition_error("hull_norm_bound: vector has wrong dimension");
  for (double v : a)
    if (!(std::abs(v) <= 1.0))
      throw precondition_error("hull_norm_bound: coefficients must satisfy |a_j| <= 1");
  return norm2(detail::multiplier_combination(sys, a, x));
}

/// E|Σ_j δ_j a_j| over independent uniform signs, by full enumeration.
inline double rademacher_mean_abs(std::span<const double> a) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  if (n > 30)
    throw capacity_error("rademacher_mean_abs: enumeration limited to 30 terms", 30);
  // δ and -δ contribute equally; fix δ_1 = +1.
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  std::vector<double> delta(n, 1.0);
  double s = 0.0;
  for (double v : a) s += v;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (i != 0) {
      const std::size_t j = static_cast<std::size_t>(std::countr_zero(i)) + 1;
      delta[j] = -delta[j];
      if ((i & 0xFF) == 0) {
        s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += delta[k] * a[k];
      } else {
        s += 2.0 * delta[j] * a[j];
      }
    }
    acc += std::abs(s);
  }
  return acc / static_cast<double>(total);
}

/// Sign vectors and index set that certify a lower bound on C for an
/// equal-norm pair (‖x_j‖ = ‖f_j‖ = D). With u = U_F δ and w = U_X γ,
/// the unit vectors x = δ/√M, f = γ/√M and phases ε_i = sign(u_i w_i) give
/// C ≥ ⟨T_ε x, f⟩ = Σ_i |u_i w_i| / M.
struct KhintchineWitness {
  std::vector<double> delta;   // length M
  std::vector<double> gamma;   // length M
  double k1 = default_k1;
  double alpha = default_k1 / 3.0;
  double norm = 0.0;           // D
  double beta = 0.0;           // λ₁(S_F)·M / trace(S_F)
  std::vector<std::size_t> index_set;  // zero-based i with |u_i| ≥ D·alpha
  std::vector<double> phases;          // length N
  double delta_sum = 0.0;      // Σ_i |u_i|
  double delta_target = 0.0;   // k1·D·N
  double gamma_sum = 0.0;      // Σ_{i∈I} |w_i|
  double gamma_target = 0.0;   // β⁻¹·D·k1·(k1 - alpha)²·N
  double certified_lower_bound = 0.0;
};

namespace detail {

struct SignSearch {
  std::vector<double> signs;
  double score = -1.0;
};

// Maximizes Σ_{i ∈ rows} |⟨s, v_i⟩| over s ∈ {±1}^M.
inline double sign_score(const Frame& frame, std::span<const std::size_t> rows,
                         std::span<const double> s) {
  double acc = 0.0;
  for (std::size_t i : rows) acc += std::abs(dot<double>(s, frame.vector(i)));
  return acc;
}

inline SignSearch enumerate_signs(const Frame& frame, std::span<const std::size_t> rows) {
  const std::size_t m = frame.m();
  const std::uint64_t total = std::uint64_t{1} << (m - 1);
  std::vector<double> s(m, 1.0);
  std::vector<double> proj(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) proj[r] = dot<double>(s, frame.vector(rows[r]));
  SignSearch best;
  std::uint64_t pattern = 0;
  std::uint64_t best_pattern = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (i != 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(i));
      const std::size_t j = bit + 1;
      s[j] = -s[j];
      pattern ^= std::uint64_t{1} << bit;
      for (std::size_t r = 0; r < rows.size(); ++r)
        proj[r] += 2.0 * s[j] * frame.vector(rows[r])[j];
    }
    double score = 0.0;
    for (double p : proj) score += std::abs(p);
    if (score > best.score || (score == best.score && pattern < best_pattern)) {
      best.score = score;
      best_pattern = pattern;
    }
  }
  best.signs = signs_from_pattern(best_pattern, m);
  best.score = sign_score(frame, rows, best.signs);
  return best;
}

inline SignSearch sample_signs(const Frame& frame, std::span<const std::size_t> rows,
                               const CounterRng& rng, int samples) {
  const std::size_t m = frame.m();
  SignSearch best;
  std::vector<double> s(m);
  for (int k = 0; k < samples; ++k) {
    const CounterRng draw = rng.fork(static_cast<std::uint64_t>(k));
    for (std::size_t j = 0; j < m; ++j) s[j] = draw.sign(j);
    const double score = sign_score(frame, rows, s);
    if (score > best.score) best = {s, score};
  }
  return best;
}

inline SignSearch find_signs(const Frame& frame, std::span<const std::size_t> rows, double target,
                             std::uint64_t seed, const char* label) {
  constexpr std::size_t enumeration_limit = 20;
  constexpr int samples_per_round = 10000;
  constexpr int rounds = 10;
  if (frame.m() <= enumeration_limit) {
    auto best = enumerate_signs(frame, rows);
    if (best.score >= target) return best;
  } else {
    const CounterRng root(seed);
    SignSearch best;
    for (int round = 0; round < rounds; ++round) {
      auto cand = sample_signs(frame, rows, root.fork(static_cast<std::uint64_t>(round)),
                               samples_per_round);
      if (cand.score > best.score) best = std::move(cand);
      if (best.score >= target) return best;
    }
  }
  throw search_failure(std::string("khintchine_witness: no ") + label +
                       " sign vector reaches the required sum");
}

}  // namespace detail

/// Builds the witness for an equal-norm pair. The symbol is folded into F
/// first. Requires ‖x_j‖ = ‖f_j‖ = D > 0 for every j (relative 1e-9).
inline KhintchineWitness khintchine_witness(const MultiplierSystem& input, double k1 = default_k1,
                                            std::uint64_t seed = 0) {
  if (!(k1 > 0.0)) throw precondition_error("khintchine_witness: k1 must be positive");
  const MultiplierSystem sys = input.absorbed();
  const std::size_t n = sys.n();
  const std::size_t m = sys.m();
  const double d = sys.x().norm(0);
  if (!(d > 0.0)) throw precondition_error("khintchine_witness: vectors must be nonzero");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(sys.x().norm(j) - d) > 1e-9 * d || std::abs(sys.f().norm(j) - d) > 1e-9 * d)
      throw precondition_error(
          "khintchine_witness: equal-norm hypothesis ||x_j|| = ||f_j|| = D violated at j = " +
          std::to_string(j));
  }

  const auto spec_f = spectral_summary(sys.f());

  KhintchineWitness w;
  w.k1 = k1;
  w.alpha = k1 / 3.0;
  w.norm = d;
  w.beta = *spec_f.beta;

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  w.delta_target = k1 * d * static_cast<double>(n);
  auto delta = detail::find_signs(sys.f(), all, w.delta_target, seed, "delta");
  w.delta = delta.signs;
  w.delta_sum = delta.score;

  std::vector<double> u(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = dot<double>(w.delta, sys.f().vector(i));
    if (std::abs(u[i]) >= d * w.alpha) w.index_set.push_back(i);
  }

  w.gamma_target = d * k1 * (k1 - w.alpha) * (k1 - w.alpha) * static_cast<double>(n) / w.beta;
  if (w.index_set.empty())
    throw search_failure("khintchine_witness: index set is empty for the chosen delta");
  auto gamma = detail::find_signs(sys.x(), w.index_set, w.gamma_target,
                                  CounterRng::mix(seed + 1), "gamma");
  w.gamma = gamma.signs;
  w.gamma_sum = gamma.score;

  w.phases.resize(n);
  double certified = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = dot<double>(w.gamma, sys.x().vector(i));
    const double prod = u[i] * v[i];
    w.phases[i] = prod < 0.0 ? -1.0 : 1.0;
    certified += std::abs(prod);
  }
  w.certified_lower_bound = certified / static_cast<double>(m);
  return w;
}

}  // namespace framekit

#endif  // FRAMEKIT_UNCONDITIONALITY_HPP
