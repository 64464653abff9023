#pragma once

// Report serialization (CSV, JSON) and TOML experiment configs.
//
// Config schema: one table per experiment, run in file order.
//
//   [growth_difference_square]
//   statistic = "value_set"          # see statistic_table in harness.hpp
//   polynomial = "(x - y)^2 + z"     # value_set, energy, rudnev_ratio, sandwich_check
//   domain = "prime"                 # prime | extension | integers
//   p = [10007]                      # integer or array; unused for integers
//   N = [100]                        # integer or array; unused for subfield
//   d = [1, 2, 3]                    # distance, dot, max_proxy, g_sum
//   generator = "random_subset"      # random_subset | interval | geometric | subfield
//   base = 2                         # geometric
//   lo = 1                           # random_subset on the integer line
//   hi = 10000
//   gs = ["(x - y)^2", "x*y"]        # g_sum (cycled), g_plus_c (first entry)
//   construction = "auto"            # auto | partial_mixed | full_mixed
//   sets = "shared"                  # shared (A = B = C) | independent
//   instances = 3
//   seed = 42
//   max_evaluations = 200000000
//   wall_budget_s = 60

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "fflab/harness.hpp"
#include "json.hpp"
#include "toml.hpp"

namespace fflab {

inline constexpr std::string_view csv_header =
    "experiment_id,p,domain,generator,N,d,statistic,cardinality,predicted,ratio,saturated,seed,instance,wall_ms";

namespace detail {

inline std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline void emit_csv(const std::vector<ExperimentReport>& rows, std::ostream& os) {
  os << csv_header << '\n';
  for (const auto& r : rows) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    os << detail::csv_field(r.experiment_id) << ',' << (r.domain == Domain::integer_line ? "inf" : std::to_string(r.p))
       << ',' << to_string(r.domain) << ',' << detail::csv_field(r.generator) << ',' << r.n << ','
       << (r.d ? std::to_string(*r.d) : "") << ',' << r.statistic << ','
       << (r.cardinality ? std::to_string(*r.cardinality) : "") << ','
       << (r.error ? "" : detail::format_g6(r.predicted)) << ',' << (r.error ? "" : detail::format_g6(r.ratio)) << ','
       << (r.saturated ? "true" : "false") << ',' << r.seed << ',' << r.instance << ',' << wall << '\n';
  }
}

inline nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["experiment_id"] = r.experiment_id;
  j["p"] = r.domain == Domain::integer_line ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.p);
  j["domain"] = to_string(r.domain);
  j["generator"] = r.generator;
  j["N"] = r.n;
  j["d"] = r.d ? nlohmann::ordered_json(*r.d) : nlohmann::ordered_json(nullptr);
  j["statistic"] = r.statistic;
  j["cardinality"] = r.cardinality ? nlohmann::ordered_json(*r.cardinality) : nlohmann::ordered_json(nullptr);
  j["predicted"] = r.predicted;
  j["ratio"] = r.ratio;
  j["saturated"] = r.saturated;
  j["seed"] = r.seed;
  j["instance"] = r.instance;
  j["wall_ms"] = r.wall_ms;
  j["claim"] = r.claim;
  j["error"] = r.error ? nlohmann::ordered_json(*r.error) : nlohmann::ordered_json(nullptr);
  auto counts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.counts) counts[k] = v;
  j["counts"] = counts;
  return j;
}

inline void emit_json(const std::vector<ExperimentReport>& rows, std::ostream& os) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  os << arr.dump(2) << '\n';
}

inline std::vector<ExperimentReport> parse_json_reports(std::string_view text) {
  std::vector<ExperimentReport> out;
  try {
    const auto arr = nlohmann::ordered_json::parse(text);
    for (const auto& j : arr) {
      ExperimentReport r;
      r.experiment_id = j.at("experiment_id").get<std::string>();
      r.domain = parse_domain(j.at("domain").get<std::string>());
      r.p = j.at("p").is_null() ? 0 : j.at("p").get<std::uint64_t>();
      r.generator = j.at("generator").get<std::string>();
      r.n = j.at("N").get<std::uint64_t>();
      if (!j.at("d").is_null()) r.d = j.at("d").get<int>();
      r.statistic = j.at("statistic").get<std::string>();
      if (!j.at("cardinality").is_null()) r.cardinality = j.at("cardinality").get<std::uint64_t>();
      r.predicted = j.at("predicted").get<double>();
      r.ratio = j.at("ratio").get<double>();
      r.saturated = j.at("saturated").get<bool>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.instance = j.at("instance").get<std::uint64_t>();
      r.wall_ms = j.at("wall_ms").get<double>();
      r.claim = j.at("claim").get<std::string>();
      if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
      for (const auto& [k, v] : j.at("counts").items()) r.counts.emplace_back(k, v.get<std::uint64_t>());
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse, std::string("report JSON: ") + e.what());
  }
  return out;
}

enum class Format { csv, json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw Error(Errc::parse, "unknown format '" + std::string(s) + "'");
}

inline void emit(const std::vector<ExperimentReport>& rows, Format format, std::ostream& os) {
  if (format == Format::csv) emit_csv(rows, os);
  else emit_json(rows, os);
  if (!os) throw Error(Errc::io, "failed writing report");
}

inline void emit(const std::vector<ExperimentReport>& rows, Format format, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw Error(Errc::io, "cannot open '" + path + "' for writing");
  emit(rows, format, file);
}

// ---------------------------------------------------------------------------
// TOML configs

namespace detail {

template <typename T>
std::vector<T> toml_list(const toml::node& node, const std::string& where) {
  std::vector<T> out;
  auto one = [&](const toml::node& n) {
    const auto v = n.value<std::int64_t>();
    if (!v || *v < 0) throw Error(Errc::parse, where + ": expected a non-negative integer");
    out.push_back(static_cast<T>(*v));
  };
  if (const auto* arr = node.as_array()) {
    for (const auto& n : *arr) one(n);
  } else {
    one(node);
  }
  return out;
}

inline std::string toml_string(const toml::node& node, const std::string& where) {
  const auto v = node.value<std::string>();
  if (!v) throw Error(Errc::parse, where + ": expected a string");
  return *v;
}

inline std::int64_t toml_int(const toml::node& node, const std::string& where) {
  const auto v = node.value<std::int64_t>();
  if (!v) throw Error(Errc::parse, where + ": expected an integer");
  return *v;
}

inline ExperimentConfig parse_experiment(const std::string& id, const toml::table& t) {
  ExperimentConfig cfg;
  cfg.id = id;
  bool has_statistic = false;
  for (const auto& [key_node, node] : t) {
    const std::string key(key_node.str());
    const std::string where = id + "." + key;
    if (key == "statistic") {
      cfg.statistic = parse_statistic(toml_string(node, where));
      has_statistic = true;
    } else if (key == "polynomial") {
      cfg.polynomial = toml_string(node, where);
    } else if (key == "domain") {
      cfg.domain = parse_domain(toml_string(node, where));
    } else if (key == "p") {
      cfg.ps = toml_list<std::uint64_t>(node, where);
    } else if (key == "N") {
      cfg.ns = toml_list<std::uint64_t>(node, where);
    } else if (key == "d") {
      cfg.ds = toml_list<int>(node, where);
    } else if (key == "generator") {
      cfg.generator.kind = parse_generator_kind(toml_string(node, where));
    } else if (key == "base") {
      cfg.generator.base = toml_int(node, where);
    } else if (key == "lo") {
      cfg.generator.lo = toml_int(node, where);
    } else if (key == "hi") {
      cfg.generator.hi = toml_int(node, where);
    } else if (key == "gs") {
      const auto* arr = node.as_array();
      if (!arr) throw Error(Errc::parse, where + ": expected an array of strings");
      for (const auto& n : *arr) cfg.gs.push_back(toml_string(n, where));
    } else if (key == "construction") {
      const auto s = toml_string(node, where);
      if (s == "partial_mixed") cfg.construction = ConstructionKind::partial_mixed;
      else if (s == "full_mixed") cfg.construction = ConstructionKind::full_mixed;
      else if (s != "auto") throw Error(Errc::parse, where + ": expected auto, partial_mixed or full_mixed");
    } else if (key == "sets") {
      const auto s = toml_string(node, where);
      if (s != "shared" && s != "independent") throw Error(Errc::parse, where + ": expected shared or independent");
      cfg.shared_sets = s == "shared";
    } else if (key == "instances") {
      cfg.instances = static_cast<std::uint64_t>(toml_int(node, where));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(toml_int(node, where));
    } else if (key == "max_evaluations") {
      cfg.budget.max_evaluations = static_cast<std::uint64_t>(toml_int(node, where));
    } else if (key == "wall_budget_s") {
      const auto v = node.value<double>();
      if (!v || *v <= 0) throw Error(Errc::parse, where + ": expected a positive number");
      cfg.wall_budget_s = *v;
    } else {
      throw Error(Errc::parse, where + ": unknown key");
    }
  }
  if (!has_statistic) throw Error(Errc::parse, id + ": missing 'statistic'");
  if (cfg.domain != Domain::integer_line && cfg.ps.empty()) throw Error(Errc::parse, id + ": missing 'p'");
  if (cfg.generator.kind != GeneratorKind::subfield && cfg.ns.empty()) throw Error(Errc::parse, id + ": missing 'N'");
  if (info(cfg.statistic).uses_polynomial && cfg.polynomial.empty()) {
    throw Error(Errc::parse, id + ": statistic needs 'polynomial'");
  }
  for (int d : cfg.ds) {
    if (d < 1 || d > 62) throw Error(Errc::parse, id + ".d: dimensions must lie in [1, 62]");
  }
  // Validate moduli up front so a typo fails the load, not every row.
  if (cfg.domain != Domain::integer_line) {
    for (auto p : cfg.ps) {
      try {
        make_field(cfg.domain, p);
      } catch (const Error& e) {
        throw Error(Errc::parse, id + ".p: " + e.what());
      }
    }
  }
  return cfg;
}

}  // namespace detail

inline std::vector<ExperimentConfig> parse_config(std::string_view text, const std::string& source = "config") {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ": " << e.description();
    throw Error(Errc::parse, msg.str());
  }
  std::vector<std::pair<std::uint32_t, ExperimentConfig>> ordered;
  for (const auto& [key, node] : root) {
    const auto* table = node.as_table();
    if (!table) throw Error(Errc::parse, std::string(key.str()) + ": top-level entries must be tables");
    ordered.emplace_back(key.source().begin.line, detail::parse_experiment(std::string(key.str()), *table));
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ExperimentConfig> out;
  for (auto& [_, cfg] : ordered) out.push_back(std::move(cfg));
  return out;
}

inline std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace fflab
