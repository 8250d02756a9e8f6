#ifndef FRAMEKIT_TOOLS_CLI_HPP
#define FRAMEKIT_TOOLS_CLI_HPP

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "framekit/framekit.hpp"

namespace framekit::cli {

enum ExitCode : int {
  ok = 0,
  check_failed = 1,
  usage = 2,
  malformed_input = 3,
  schema = 4,
  capacity = 5,
  precondition = 6,
  numerical = 7,
  io = 8,
};

struct RunConfig {
  std::string command;
  std::optional<std::string> input_path;
  std::optional<std::string> output_path;
  std::uint64_t seed = 0;
  int trials = 200;
  std::optional<double> tol;
  double k1 = default_k1;
  std::string format = "json";
  std::size_t cutoff = default_enumeration_cutoff;
  bool exact_only = false;
  int max_iters = 20000;
  // generate
  std::string kind;
  std::size_t n = 0;
  std::size_t m = 1;
  double scale = 1.0;
  // verify
  std::string suite = "all";
  std::string seeds = "1..20";
  std::size_t n_max = 12;
  int samples = 50;
};

/// "a..b" (inclusive) or a comma-separated list.
inline std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  auto num = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw precondition_error("bad seed list '" + text + "'");
    return v;
  };
  std::vector<std::uint64_t> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = num(std::string_view(text).substr(0, dots));
    const auto hi = num(std::string_view(text).substr(dots + 2));
    if (hi < lo) throw precondition_error("bad seed range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(num(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

inline json read_input(const RunConfig& cfg) {
  if (!cfg.input_path) throw precondition_error(cfg.command + ": --input is required");
  std::ifstream in(*cfg.input_path);
  if (!in) throw std::ios_base::failure("cannot open " + *cfg.input_path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

inline std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(10) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

/// Flattened "key  value" lines; nested objects use dotted keys.
inline void write_table(const json& j, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      write_table(v, out, key);
    } else if (v.is_array()) {
      out << std::left << std::setw(28) << key << ' ';
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << scalar_text(v[i]);
      out << '\n';
    } else {
      out << std::left << std::setw(28) << key << ' ' << scalar_text(v) << '\n';
    }
  }
}

inline void write_report_table(const std::vector<TheoremReport>& reports, std::ostream& out) {
  out << std::left << std::setw(26) << "check" << std::setw(6) << "seed" << std::setw(16) << "status"
      << std::right << std::setw(16) << "lhs" << std::setw(16) << "rhs" << std::setw(14)
      << "margin" << '\n';
  for (const auto& r : reports) {
    const auto seed = r.details.find("seed");
    out << std::left << std::setw(26) << to_string(r.theorem) << std::setw(6)
        << (seed == r.details.end() ? std::string("-") : std::to_string(static_cast<long long>(seed->second)))
        << std::setw(16) << to_string(r.verdict) << std::right << std::setprecision(8)
        << std::setw(16) << r.lhs << std::setw(16) << r.rhs << std::setprecision(3)
        << std::setw(14) << r.margin << '\n';
  }
  std::size_t pass = 0, fail = 0, other = 0;
  for (const auto& r : reports) (r.passed() ? pass : r.failed() ? fail : other)++;
  out << pass << " pass, " << fail << " fail, " << other << " inconclusive or not applicable\n";
}

struct Outcome {
  std::string text;
  int code = ok;
};

inline Outcome render(const json& j, const RunConfig& cfg) {
  std::ostringstream os;
  if (cfg.format == "table")
    write_table(j, os);
  else
    os << j.dump(2) << '\n';
  return {os.str(), ok};
}

inline Outcome cmd_analyze(const RunConfig& cfg) {
  const json in = read_input(cfg);
  json out;
  if (is_system_json(in)) {
    const auto sys = system_from_json(in);
    out = {{"x", to_json(spectral_summary(sys.x(), cfg.tol.value_or(1e-10)))},
           {"f", to_json(spectral_summary(sys.f(), cfg.tol.value_or(1e-10)))}};
  } else {
    out = {{"frame", to_json(spectral_summary(frame_from_json(in), cfg.tol.value_or(1e-10)))}};
  }
  return render(out, cfg);
}

inline Outcome cmd_constant(const RunConfig& cfg) {
  const auto sys = system_from_json(read_input(cfg));
  UnconditionalityEstimate est;
  if (cfg.exact_only || sys.n() <= cfg.cutoff) {
    ExactOptions eo;
    eo.cutoff = cfg.cutoff;
    est = exact_constant(sys, eo);
  } else {
    est = randomized_constant(sys, cfg.trials, cfg.seed);
  }
  return render(to_json(est), cfg);
}

inline Outcome cmd_split(const RunConfig& cfg) {
  const auto sys = system_from_json(read_input(cfg));
  OptimalSplitOptions so;
  so.tol = cfg.tol.value_or(so.tol);
  so.max_iters = cfg.max_iters;
  json out = {{"explicit", to_json(explicit_split(sys))},
              {"optimal", to_json(optimal_split(sys, so))},
              {"unit", to_json(unit_split(sys))}};
  return render(out, cfg);
}

inline Outcome cmd_witness(const RunConfig& cfg) {
  const auto sys = system_from_json(read_input(cfg));
  return render(to_json(khintchine_witness(sys, cfg.k1, cfg.seed)), cfg);
}

inline Outcome cmd_generate(const RunConfig& cfg) {
  GeneratorSpec spec;
  if (cfg.input_path) {
    spec = generator_spec_from_json(read_input(cfg));
  } else {
    if (cfg.kind.empty()) throw precondition_error("generate: --kind or --input is required");
    if (cfg.n == 0) throw precondition_error("generate: --n is required");
    spec.kind = parse_generator_kind(cfg.kind);
    spec.n = cfg.n;
    spec.m = cfg.m;
    spec.seed = cfg.seed;
    spec.scale = cfg.scale;
  }
  return render(to_json(generate(spec)), cfg);
}

inline Outcome cmd_verify(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.tol = cfg.tol.value_or(opt.tol);
  opt.k1 = cfg.k1;
  opt.cutoff = cfg.cutoff;
  opt.trials = cfg.trials;
  opt.seed = cfg.seed;

  std::vector<TheoremReport> reports;
  if (cfg.suite == "khintchine") {
    reports.push_back(check_khintchine(cfg.n_max, cfg.samples, cfg.seed, cfg.k1));
  } else if (cfg.input_path) {
    const auto sys = system_from_json(read_input(cfg));
    std::vector<TheoremId> ids;
    if (cfg.suite == "all") {
      for (std::size_t i = 0; i < std::size(theorem_names); ++i)
        if (static_cast<TheoremId>(i) != TheoremId::khintchine) ids.push_back(static_cast<TheoremId>(i));
    } else {
      ids.push_back(parse_theorem_id(cfg.suite));
    }
    for (auto id : ids) reports.push_back(run_check(id, sys, opt));
  } else {
    reports = run_suite(cfg.suite, parse_seeds(cfg.seeds), opt);
  }

  std::ostringstream os;
  if (cfg.format == "table") {
    write_report_table(reports, os);
  } else {
    for (const auto& r : reports) os << to_json(r).dump() << '\n';
  }
  bool any_fail = false;
  for (const auto& r : reports) any_fail = any_fail || r.failed();
  return {os.str(), any_fail ? check_failed : ok};
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Frame multiplier analysis: spectra, unconditionality constants, weight splits"};
  app.require_subcommand(1);

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input_path, "Input JSON file");
    sub->add_option("--output,-o", cfg.output_path, "Write result here instead of stdout");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "table"}));
  };

  auto* analyze = app.add_subcommand("analyze", "Frame operator spectrum of a frame or of both frames of a system");
  add_io(analyze);
  analyze->add_option("--tol", cfg.tol, "Eigenpair residual tolerance relative to ||S||_F (default 1e-10)");

  auto* constant = app.add_subcommand("constant", "Unconditionality constant C");
  add_io(constant);
  constant->add_option("--cutoff", cfg.cutoff, "Largest N enumerated exactly")->capture_default_str();
  constant->add_flag("--exact", cfg.exact_only, "Fail with a capacity error instead of falling back to search");
  constant->add_option("--trials", cfg.trials, "Random starts above the cutoff")->capture_default_str();
  constant->add_option("--seed", cfg.seed, "Seed for the randomized search")->capture_default_str();

  auto* split = app.add_subcommand("split", "Explicit, optimal and unit weight splits");
  add_io(split);
  split->add_option("--tol", cfg.tol, "Certified optimality gap (default 1e-9)");
  split->add_option("--max-iters", cfg.max_iters, "Optimizer iteration budget")->capture_default_str();

  auto* witness = app.add_subcommand("witness", "Sign-vector witness for a lower bound on C");
  add_io(witness);
  witness->add_option("--k1", cfg.k1, "Khintchine constant")->capture_default_str();
  witness->add_option("--seed", cfg.seed, "Seed for sampled sign search (M > 20)")->capture_default_str();

  auto* gen = app.add_subcommand("generate", "Write a generated frame or system");
  add_io(gen);
  gen->add_option("--kind", cfg.kind, "Generator kind")
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(generator_kind_names),
                                                     std::end(generator_kind_names))));
  gen->add_option("--n", cfg.n, "Number of vectors");
  gen->add_option("--m", cfg.m, "Dimension")->capture_default_str();
  gen->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  gen->add_option("--scale", cfg.scale, "Vector scale")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run checks on a system or on seeded batches");
  add_io(verify);
  std::vector<std::string> suites{"all"};
  suites.insert(suites.end(), std::begin(theorem_names), std::end(theorem_names));
  verify->add_option("--suite", cfg.suite, "Check to run, or all")
      ->check(CLI::IsMember(suites))
      ->capture_default_str();
  verify->add_option("--seeds", cfg.seeds, "Seed range a..b or list a,b,c")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Seed for randomized C and the khintchine sample")->capture_default_str();
  verify->add_option("--trials", cfg.trials, "Random starts when N exceeds the cutoff")->capture_default_str();
  verify->add_option("--cutoff", cfg.cutoff, "Largest N enumerated exactly")->capture_default_str();
  verify->add_option("--tol", cfg.tol, "Absolute slack on inequality margins (default 1e-8)");
  verify->add_option("--k1", cfg.k1, "Khintchine constant")->capture_default_str();
  verify->add_option("--n-max", cfg.n_max, "khintchine: largest N")->capture_default_str();
  verify->add_option("--samples", cfg.samples, "khintchine: vectors per N")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    Outcome result;
    if (cfg.command == "analyze") result = cmd_analyze(cfg);
    else if (cfg.command == "constant") result = cmd_constant(cfg);
    else if (cfg.command == "split") result = cmd_split(cfg);
    else if (cfg.command == "witness") result = cmd_witness(cfg);
    else if (cfg.command == "generate") result = cmd_generate(cfg);
    else result = cmd_verify(cfg);

    if (cfg.output_path) {
      std::ofstream file(*cfg.output_path);
      if (!file) throw std::ios_base::failure("cannot write " + *cfg.output_path);
      file << result.text;
    } else {
      out << result.text;
    }
    return result.code;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << '\n';
    return malformed_input;
  } catch (const schema_error& e) {
    err << "schema error: " << e.what() << '\n';
    return schema;
  } catch (const capacity_error& e) {
    err << "capacity error: " << e.what() << " (cutoff " << e.limit() << ")\n";
    return capacity;
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << '\n';
    return precondition;
  } catch (const error& e) {
    err << "numerical error: " << e.what() << '\n';
    return numerical;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return io;
  }
}

}  // namespace framekit::cli

#endif  // FRAMEKIT_TOOLS_CLI_HPP
