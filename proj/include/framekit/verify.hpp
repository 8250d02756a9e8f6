#ifndef FRAMEKIT_VERIFY_HPP
#define FRAMEKIT_VERIFY_HPP

// Checkers that evaluate a bound's hypothesis and conclusion on a concrete
// system and report every intermediate quantity. A report passes iff the
// hypothesis holds and lhs ≤ rhs + tol.
//
// When C is only a randomized lower bound (N above the enumeration cutoff),
// any inequality with C on the right-hand side can only be refuted by the
// true C, so a failure there is reported as inconclusive.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "framekit/error.hpp"
#include "framekit/frame.hpp"
#include "framekit/generators.hpp"
#include "framekit/rng.hpp"
#include "framekit/unconditionality.hpp"
#include "framekit/weight_split.hpp"

namespace framekit {

enum class TheoremId {
  par_split,
  main_equal_norm,
  tight_corollary,
  equinorm_tight_corollary,
  trace_minmax,
  khintchine,
};

inline constexpr std::string_view theorem_names[] = {
    "par_split",    "main_equal_norm", "tight_corollary", "equinorm_tight_corollary",
    "trace_minmax", "khintchine",
};

inline std::string_view to_string(TheoremId id) {
  return theorem_names[static_cast<std::size_t>(id)];
}

inline TheoremId parse_theorem_id(std::string_view s) {
  for (std::size_t i = 0; i < std::size(theorem_names); ++i)
    if (theorem_names[i] == s) return static_cast<TheoremId>(i);
  throw precondition_error("unknown check '" + std::string(s) + "'");
}

enum class Verdict { pass, fail, inconclusive, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

struct TheoremReport {
  TheoremId theorem = TheoremId::par_split;
  bool hypothesis_satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double tol = 0.0;
  bool one_sided = false;  // C is a lower bound, not exact
  Verdict verdict = Verdict::not_applicable;
  std::string inputs_digest;
  std::string note;
  std::map<std::string, double> details;

  bool passed() const { return verdict == Verdict::pass; }
  bool failed() const { return verdict == Verdict::fail; }
};

struct VerifyOptions {
  double tol = 1e-8;          // absolute slack on inequality margins
  double hyp_rel_tol = 1e-8;  // relative slack on tightness / equal norms
  double k1 = default_k1;
  std::size_t cutoff = default_enumeration_cutoff;
  int trials = 200;           // randomized C above the cutoff
  std::uint64_t seed = 0;
  double split_tol = 1e-9;    // optimal_split certificate gap
};

/// (27/4)·k1⁻⁴, the Bessel-bound factor for equal-norm pairs.
inline double equal_norm_factor(double k1) { return 27.0 / 4.0 / std::pow(k1, 4); }

namespace detail {

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 0x100000001B3ULL;
    }
  }
  void add(double v) {
    const auto b = std::bit_cast<std::uint64_t>(v);
    bytes(&b, sizeof b);
  }
  void add(std::uint64_t v) { bytes(&v, sizeof v); }
  void add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void add(const Frame& f) {
    add(static_cast<std::uint64_t>(f.n()));
    add(static_cast<std::uint64_t>(f.m()));
    for (double v : f.analysis().data()) add(v);
  }
  void add(const MultiplierSystem& s) {
    add(s.x());
    add(s.f());
    for (double v : s.symbol()) add(v);
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xCBF29CE484222325ULL;
};

inline std::string digest(TheoremId id, const MultiplierSystem& sys, const VerifyOptions& opt) {
  Fnv1a h;
  h.add(to_string(id));
  h.add(sys);
  h.add(opt.tol);
  h.add(opt.hyp_rel_tol);
  h.add(opt.k1);
  h.add(static_cast<std::uint64_t>(opt.cutoff));
  h.add(static_cast<std::uint64_t>(opt.trials));
  h.add(opt.seed);
  h.add(opt.split_tol);
  return h.hex();
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

inline bool equal_norms(const MultiplierSystem& abs, double rel) {
  for (std::size_t j = 0; j < abs.n(); ++j)
    if (!close_rel(abs.x().norm(j), abs.f().norm(j), rel)) return false;
  return true;
}

inline bool equinorm(const Frame& f, double rel) {
  const double d = f.norm(0);
  for (std::size_t j = 1; j < f.n(); ++j)
    if (!close_rel(f.norm(j), d, rel)) return false;
  return true;
}

inline UnconditionalityEstimate estimate_constant(const MultiplierSystem& sys,
                                                  const VerifyOptions& opt) {
  if (sys.n() <= opt.cutoff) {
    ExactOptions eo;
    eo.cutoff = opt.cutoff;
    return exact_constant(sys, eo);
  }
  return randomized_constant(sys, opt.trials, opt.seed);
}

inline void finish(TheoremReport& r, bool holds, bool refutable_by_lower_c) {
  r.margin = r.rhs - r.lhs;
  if (!r.hypothesis_satisfied) {
    r.verdict = Verdict::not_applicable;
  } else if (holds) {
    r.verdict = Verdict::pass;
  } else if (r.one_sided && !refutable_by_lower_c) {
    r.verdict = Verdict::inconclusive;
    r.note = "C is a randomized lower bound; failure is not a counterexample";
  } else {
    r.verdict = Verdict::fail;
  }
}

inline TheoremReport start(TheoremId id, const MultiplierSystem& sys, const VerifyOptions& opt,
                           double tol) {
  TheoremReport r;
  r.theorem = id;
  r.tol = tol;
  r.inputs_digest = digest(id, sys, opt);
  r.details["N"] = static_cast<double>(sys.n());
  r.details["M"] = static_cast<double>(sys.m());
  return r;
}

inline void record_c(TheoremReport& r, const UnconditionalityEstimate& c) {
  r.one_sided = c.status != EstimateStatus::exact;
  r.details["C"] = c.value;
  r.details["C_exact"] = r.one_sided ? 0.0 : 1.0;
}

}  // namespace detail

/// Explicit split d_j = ‖x_j‖^{-1/2}‖f_j‖^{1/2}: both weighted Bessel bounds
/// are at most C²/b with b = min_j ‖x_j‖‖f_j‖.
inline TheoremReport check_par_split(const MultiplierSystem& sys, const VerifyOptions& opt = {}) {
  auto r = detail::start(TheoremId::par_split, sys, opt, opt.tol);
  const auto abs = sys.absorbed();
  double b = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < abs.n(); ++j) b = std::min(b, abs.x().norm(j) * abs.f().norm(j));
  r.details["b"] = b;
  r.hypothesis_satisfied = b > 0.0;
  if (!r.hypothesis_satisfied) {
    r.note = "some ||x_j|| ||m_j f_j|| is zero";
    detail::finish(r, false, false);
    return r;
  }
  const auto c = detail::estimate_constant(sys, opt);
  detail::record_c(r, c);
  const auto split = explicit_split(sys);
  r.details["bessel_x"] = split.bessel_x;
  r.details["bessel_f"] = split.bessel_f;
  r.lhs = split.objective;
  r.rhs = c.value * c.value / b;
  detail::finish(r, r.lhs <= r.rhs + opt.tol, false);
  return r;
}

/// Equal-norm pairs: λ₁(S_F) ≤ (27/4)k1⁻⁴ β_F² C, and the same for X.
/// lhs/rhs report the side with the smaller margin.
inline TheoremReport check_main_equal_norm(const MultiplierSystem& sys,
                                           const VerifyOptions& opt = {}) {
  auto r = detail::start(TheoremId::main_equal_norm, sys, opt, opt.tol);
  const auto abs = sys.absorbed();
  const double kappa = equal_norm_factor(opt.k1);
  r.details["k1"] = opt.k1;
  r.details["kappa"] = kappa;
  const auto sx = spectral_summary(abs.x());
  const auto sf = spectral_summary(abs.f());
  r.hypothesis_satisfied = detail::equal_norms(abs, opt.hyp_rel_tol) && sx.beta && sf.beta;
  if (!r.hypothesis_satisfied) {
    r.note = "requires ||x_j|| = ||m_j f_j|| and nonzero frames";
    detail::finish(r, false, false);
    return r;
  }
  const auto c = detail::estimate_constant(sys, opt);
  detail::record_c(r, c);
  const double rhs_f = kappa * *sf.beta * *sf.beta * c.value;
  const double rhs_x = kappa * *sx.beta * *sx.beta * c.value;
  r.details["beta_f"] = *sf.beta;
  r.details["beta_x"] = *sx.beta;
  r.details["bessel_f"] = sf.bessel;
  r.details["bessel_x"] = sx.bessel;
  r.details["rhs_f"] = rhs_f;
  r.details["rhs_x"] = rhs_x;
  const bool holds = sf.bessel <= rhs_f + opt.tol && sx.bessel <= rhs_x + opt.tol;
  if (rhs_f - sf.bessel <= rhs_x - sx.bessel) {
    r.lhs = sf.bessel;
    r.rhs = rhs_f;
  } else {
    r.lhs = sx.bessel;
    r.rhs = rhs_x;
  }
  detail::finish(r, holds, false);
  return r;
}

/// Tight equal-norm pairs: both frame bounds equal B = M⁻¹Σ‖x_j‖² and
/// C ≤ B ≤ (27/4)k1⁻⁴ C. lhs/rhs are B and (27/4)k1⁻⁴ C.
inline TheoremReport check_tight_corollary(const MultiplierSystem& sys,
                                           const VerifyOptions& opt = {}) {
  auto r = detail::start(TheoremId::tight_corollary, sys, opt, opt.tol);
  const auto abs = sys.absorbed();
  const auto sx = spectral_summary(abs.x());
  const auto sf = spectral_summary(abs.f());
  r.hypothesis_satisfied = sx.tight(opt.hyp_rel_tol) && sf.tight(opt.hyp_rel_tol) &&
                           detail::equal_norms(abs, opt.hyp_rel_tol);
  if (!r.hypothesis_satisfied) {
    r.note = "requires two tight frames with ||x_j|| = ||m_j f_j||";
    detail::finish(r, false, false);
    return r;
  }
  const double kappa = equal_norm_factor(opt.k1);
  const double bound = sx.trace / static_cast<double>(abs.m());
  const auto c = detail::estimate_constant(sys, opt);
  detail::record_c(r, c);
  r.details["B"] = bound;
  r.details["bound_x"] = sx.bessel;
  r.details["bound_f"] = sf.bessel;
  r.details["kappa"] = kappa;
  r.details["k1"] = opt.k1;
  const bool same_bound = detail::close_rel(sx.bessel, bound, opt.hyp_rel_tol) &&
                          detail::close_rel(sf.bessel, bound, opt.hyp_rel_tol);
  const bool c_below = c.value <= bound + opt.tol;
  r.details["C_le_B_margin"] = bound - c.value;
  r.lhs = bound;
  r.rhs = kappa * c.value;
  const bool upper = r.lhs <= r.rhs + opt.tol;
  // a lower-bound C above B is still a genuine violation of C ≤ B
  detail::finish(r, same_bound && c_below && upper, !same_bound || !c_below);
  return r;
}

/// Equi-norm tight frames: with d = ‖x_1‖^{-1/2}‖f_1‖^{1/2}, both (d x_j)
/// and (d⁻¹ f_j) have Bessel bound √(N/M)·C.
inline TheoremReport check_equinorm_tight_corollary(const MultiplierSystem& sys,
                                                    const VerifyOptions& opt = {}) {
  auto r = detail::start(TheoremId::equinorm_tight_corollary, sys, opt, opt.tol);
  const auto abs = sys.absorbed();
  const auto sx = spectral_summary(abs.x());
  const auto sf = spectral_summary(abs.f());
  r.hypothesis_satisfied = sx.tight(opt.hyp_rel_tol) && sf.tight(opt.hyp_rel_tol) &&
                           detail::equinorm(abs.x(), opt.hyp_rel_tol) &&
                           detail::equinorm(abs.f(), opt.hyp_rel_tol) && abs.x().norm(0) > 0.0 &&
                           abs.f().norm(0) > 0.0;
  if (!r.hypothesis_satisfied) {
    r.note = "requires X and F to be equi-norm tight frames";
    detail::finish(r, false, false);
    return r;
  }
  const double d2 = abs.f().norm(0) / abs.x().norm(0);
  const auto c = detail::estimate_constant(sys, opt);
  detail::record_c(r, c);
  const double bx = d2 * sx.bessel;
  const double bf = sf.bessel / d2;
  r.details["d"] = std::sqrt(d2);
  r.details["bessel_x"] = bx;
  r.details["bessel_f"] = bf;
  r.lhs = std::max(bx, bf);
  r.rhs = std::sqrt(static_cast<double>(abs.n()) / static_cast<double>(abs.m())) * c.value;
  detail::finish(r, r.lhs <= r.rhs + opt.tol, false);
  return r;
}

/// Equal-norm pairs where X or F is a frame: every split has objective at
/// least A = max lower frame bound; for two tight frames the optimum equals A.
/// lhs = A, rhs = optimal objective.
inline TheoremReport check_trace_minmax(const MultiplierSystem& sys, double tol,
                                        const VerifyOptions& opt = {}) {
  auto r = detail::start(TheoremId::trace_minmax, sys, opt, tol);
  const auto abs = sys.absorbed();
  bool unimodular = true;
  for (double s : sys.symbol()) unimodular = unimodular && std::abs(s) == 1.0;
  const auto sx = spectral_summary(abs.x());
  const auto sf = spectral_summary(abs.f());
  r.hypothesis_satisfied = unimodular && detail::equal_norms(abs, opt.hyp_rel_tol) &&
                           std::max(sx.lower, sf.lower) > 0.0;
  if (!r.hypothesis_satisfied) {
    r.note = "requires unimodular symbol, ||x_j|| = ||f_j|| and a spanning X or F";
    detail::finish(r, false, false);
    return r;
  }
  const double a = std::max(sx.lower, sf.lower);
  OptimalSplitOptions so;
  so.tol = opt.split_tol;
  const auto split = optimal_split(sys, so);
  const bool both_tight = sx.tight(opt.hyp_rel_tol) && sf.tight(opt.hyp_rel_tol);
  r.details["A"] = a;
  r.details["objective"] = split.objective;
  r.details["gap"] = split.gap.value_or(std::numeric_limits<double>::quiet_NaN());
  r.details["both_tight"] = both_tight ? 1.0 : 0.0;
  r.lhs = a;
  r.rhs = split.objective;
  bool holds = r.lhs <= r.rhs + tol;
  if (both_tight) holds = holds && std::abs(split.objective - a) <= tol;
  detail::finish(r, holds, true);
  return r;
}

/// min over seeded Gaussian coefficient vectors a ∈ R^N, N = 1..n_max, of
/// E|Σ δ_j a_j| / ‖a‖₂ (exact enumeration), compared against k1.
/// lhs = k1, rhs = the minimum ratio; tolerance 1e-12.
inline TheoremReport check_khintchine(std::size_t n_max, int samples, std::uint64_t seed,
                                      double k1 = default_k1) {
  TheoremReport r;
  r.theorem = TheoremId::khintchine;
  r.tol = 1e-12;
  {
    detail::Fnv1a h;
    h.add(to_string(TheoremId::khintchine));
    h.add(static_cast<std::uint64_t>(n_max));
    h.add(static_cast<std::uint64_t>(samples));
    h.add(seed);
    h.add(k1);
    r.inputs_digest = h.hex();
  }
  r.details["k1"] = k1;
  r.details["n_max"] = static_cast<double>(n_max);
  r.details["samples"] = static_cast<double>(samples);
  r.hypothesis_satisfied = n_max >= 1 && n_max <= 16 && samples >= 1;
  if (!r.hypothesis_satisfied) {
    r.note = "requires 1 <= n_max <= 16 and samples >= 1";
    detail::finish(r, false, false);
    return r;
  }
  const CounterRng root(seed);
  double worst = std::numeric_limits<double>::infinity();
  double worst_n = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const CounterRng per_n = root.fork(n);
    for (int s = 0; s < samples; ++s) {
      const CounterRng draw = per_n.fork(static_cast<std::uint64_t>(s));
      std::vector<double> a(n);
      for (std::size_t j = 0; j < n; ++j) a[j] = draw.normal(j);
      const double ratio = rademacher_mean_abs(a) / norm2(a);
      if (ratio < worst) {
        worst = ratio;
        worst_n = static_cast<double>(n);
      }
    }
  }
  r.details["min_ratio"] = worst;
  r.details["argmin_n"] = worst_n;
  r.lhs = k1;
  r.rhs = worst;
  detail::finish(r, r.lhs <= r.rhs + r.tol, true);
  return r;
}

/// Runs one system-level check by id (khintchine is not system-level).
inline TheoremReport run_check(TheoremId id, const MultiplierSystem& sys,
                               const VerifyOptions& opt = {}) {
  switch (id) {
    case TheoremId::par_split: return check_par_split(sys, opt);
    case TheoremId::main_equal_norm: return check_main_equal_norm(sys, opt);
    case TheoremId::tight_corollary: return check_tight_corollary(sys, opt);
    case TheoremId::equinorm_tight_corollary: return check_equinorm_tight_corollary(sys, opt);
    case TheoremId::trace_minmax: return check_trace_minmax(sys, 1e-6, opt);
    case TheoremId::khintchine: break;
  }
  throw precondition_error("run_check: khintchine is not a per-system check");
}

/// Instance used by the seeded batch for a given check. Sizes stay within
/// N ≤ 8, M ≤ 4 so C is always exact.
inline MultiplierSystem batch_instance(TheoremId id, std::uint64_t seed) {
  const std::size_t m = 1 + seed % 4;
  switch (id) {
    case TheoremId::par_split:
      return random_gaussian_system(2 + seed % 7, m, seed);
    case TheoremId::main_equal_norm:
      return random_equalnorm_pair(2 + seed % 7, m, seed);
    case TheoremId::tight_corollary:
      return tight_equinorm_pair(m + seed % 5, m, seed, 1.0 + 0.5 * static_cast<double>(seed % 3));
    case TheoremId::equinorm_tight_corollary: {
      // X and F with different (but internally constant) norms
      auto base = tight_equinorm_pair(m + seed % 5, m, seed);
      Matrix f = base.f().analysis();
      for (double& v : f.data()) v *= 0.5 + static_cast<double>(seed % 4);
      return MultiplierSystem(base.x(), Frame(std::move(f)));
    }
    case TheoremId::trace_minmax:
      if (seed % 2 == 0) return tight_equinorm_pair(m + seed % 5, m, seed);
      return random_equalnorm_pair(m + seed % 5, m, seed);
    case TheoremId::khintchine: break;
  }
  throw precondition_error("batch_instance: no system for khintchine");
}

/// Evaluates fn(i) for i in [0, count) on a small thread pool; results are
/// stored by index so the output order never depends on scheduling.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) out[i] = fn(i);
      });
  }
  return out;
}

/// Seeded batch for a suite name ("all" or a check id).
inline std::vector<TheoremReport> run_suite(std::string_view suite,
                                            const std::vector<std::uint64_t>& seeds,
                                            const VerifyOptions& opt = {}) {
  std::vector<TheoremId> ids;
  if (suite == "all") {
    for (std::size_t i = 0; i < std::size(theorem_names); ++i) ids.push_back(static_cast<TheoremId>(i));
  } else {
    ids.push_back(parse_theorem_id(suite));
  }
  struct Job {
    TheoremId id;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (auto id : ids) {
    if (id == TheoremId::khintchine) {
      jobs.push_back({id, seeds.empty() ? opt.seed : seeds.front()});
      continue;
    }
    for (auto s : seeds) jobs.push_back({id, s});
  }
  return parallel_map(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    if (job.id == TheoremId::khintchine) return check_khintchine(12, 50, job.seed, opt.k1);
    auto r = run_check(job.id, batch_instance(job.id, job.seed), opt);
    r.details["seed"] = static_cast<double>(job.seed);
    return r;
  });
}

}  // namespace framekit

#endif  // FRAMEKIT_VERIFY_HPP
