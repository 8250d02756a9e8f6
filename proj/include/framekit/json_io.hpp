#ifndef FRAMEKIT_JSON_IO_HPP
#define FRAMEKIT_JSON_IO_HPP

// JSON encoding of frames, systems and every result type. Doubles are
// written with round-trip precision, so write → read is bit-exact.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "framekit/error.hpp"
#include "framekit/frame.hpp"
#include "framekit/generators.hpp"
#include "framekit/unconditionality.hpp"
#include "framekit/verify.hpp"
#include "framekit/weight_split.hpp"

namespace framekit {

using json = nlohmann::json;

/// Parses text, mapping syntax errors to parse_error with line/column.
inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw parse_error("malformed JSON", line, column);
  }
}

namespace detail {

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw schema_error(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw schema_error(where + ": missing field '" + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw schema_error(where + ": expected a number");
  return j.get<double>();
}

inline std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
    throw schema_error(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw schema_error(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline json to_json(const Frame& f) {
  json rows = json::array();
  for (std::size_t j = 0; j < f.n(); ++j) {
    auto v = f.vector(j);
    rows.push_back(json(std::vector<double>(v.begin(), v.end())));
  }
  return {{"m", f.m()}, {"n", f.n()}, {"vectors", std::move(rows)}};
}

inline Frame frame_from_json(const json& j, const std::string& where = "frame") {
  const json& rows = detail::require(j, "vectors", where);
  if (!rows.is_array()) throw schema_error(where + ".vectors: expected an array");
  std::vector<Vector> vectors;
  for (std::size_t r = 0; r < rows.size(); ++r)
    vectors.push_back(detail::numbers(rows[r], where + ".vectors[" + std::to_string(r) + "]"));
  Frame frame(vectors);
  if (j.contains("n") && detail::count(j["n"], where + ".n") != frame.n())
    throw schema_error(where + ": n = " + j["n"].dump() + " but " + std::to_string(frame.n()) +
                       " vectors given");
  if (j.contains("m") && detail::count(j["m"], where + ".m") != frame.m())
    throw schema_error(where + ": m = " + j["m"].dump() + " but vectors have dimension " +
                       std::to_string(frame.m()));
  return frame;
}

inline json to_json(const MultiplierSystem& s) {
  return {{"x", to_json(s.x())}, {"f", to_json(s.f())}, {"symbol", s.symbol()}};
}

inline MultiplierSystem system_from_json(const json& j) {
  Frame x = frame_from_json(detail::require(j, "x", "system"), "system.x");
  Frame f = frame_from_json(detail::require(j, "f", "system"), "system.f");
  if (!j.contains("symbol")) return MultiplierSystem(std::move(x), std::move(f));
  return MultiplierSystem(std::move(x), std::move(f), detail::numbers(j["symbol"], "system.symbol"));
}

inline bool is_system_json(const json& j) { return j.is_object() && j.contains("x") && j.contains("f"); }

inline json to_json(const SpectralSummary& s) {
  return {{"eigenvalues", s.eigenvalues},
          {"trace", s.trace},
          {"bessel", s.bessel},
          {"lower", s.lower},
          {"beta", s.beta ? json(*s.beta) : json(nullptr)},
          {"degenerate", s.degenerate},
          {"condition_number", detail::finite_or_null(s.condition_number())},
          {"max_residual", s.max_residual}};
}

inline json to_json(const UnconditionalityEstimate& e) {
  return {{"value", e.value},
          {"status", to_string(e.status)},
          {"witness_signs", e.witness_signs},
          {"witness_vector", e.witness_vector},
          {"evaluations", e.evaluations}};
}

inline json to_json(const SplitResult& r) {
  return {{"d", r.d},
          {"indices", r.indices},
          {"bessel_x", r.bessel_x},
          {"bessel_f", r.bessel_f},
          {"objective", r.objective},
          {"method", to_string(r.method)},
          {"lower_certificate", r.lower_certificate ? json(*r.lower_certificate) : json(nullptr)},
          {"gap", r.gap ? json(*r.gap) : json(nullptr)},
          {"iterations", r.iterations},
          {"converged", r.converged}};
}

inline json to_json(const KhintchineWitness& w) {
  return {{"delta", w.delta},
          {"gamma", w.gamma},
          {"k1", w.k1},
          {"alpha", w.alpha},
          {"D", w.norm},
          {"beta", w.beta},
          {"index_set", w.index_set},
          {"phases", w.phases},
          {"delta_sum", w.delta_sum},
          {"delta_target", w.delta_target},
          {"gamma_sum", w.gamma_sum},
          {"gamma_target", w.gamma_target},
          {"certified_lower_bound", w.certified_lower_bound}};
}

inline json to_json(const TheoremReport& r) {
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = detail::finite_or_null(v);
  return {{"theorem_id", std::string(to_string(r.theorem))},
          {"hypothesis_satisfied", r.hypothesis_satisfied},
          {"lhs", detail::finite_or_null(r.lhs)},
          {"rhs", detail::finite_or_null(r.rhs)},
          {"margin", detail::finite_or_null(r.margin)},
          {"tol", r.tol},
          {"one_sided", r.one_sided},
          {"status", to_string(r.verdict)},
          {"inputs_digest", r.inputs_digest},
          {"note", r.note},
          {"details", std::move(details)}};
}

inline json to_json(const GeneratorSpec& g) {
  return {{"kind", std::string(to_string(g.kind))},
          {"n", g.n},
          {"m", g.m},
          {"seed", g.seed},
          {"scale", g.scale}};
}

inline GeneratorSpec generator_spec_from_json(const json& j) {
  GeneratorSpec g;
  const json& kind = detail::require(j, "kind", "generator");
  if (!kind.is_string()) throw schema_error("generator.kind: expected a string");
  g.kind = parse_generator_kind(kind.get<std::string>());
  g.n = detail::count(detail::require(j, "n", "generator"), "generator.n");
  if (j.contains("m")) g.m = detail::count(j["m"], "generator.m");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw schema_error("generator.seed: expected a non-negative integer");
    g.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("scale")) g.scale = detail::number(j["scale"], "generator.scale");
  return g;
}

inline json to_json(const Generated& g) {
  return std::visit([](const auto& v) { return to_json(v); }, g);
}

}  // namespace framekit

#endif  // FRAMEKIT_JSON_IO_HPP
