#pragma once

// Config-driven experiment grid: each row draws seeded ground sets, measures
// one statistic, and compares it with the predicted growth.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "fflab/budget.hpp"
#include "fflab/generate.hpp"
#include "fflab/geoexp.hpp"
#include "fflab/incidence.hpp"
#include "fflab/valueset.hpp"

namespace fflab {

enum class Statistic {
  value_set,
  energy,
  a_plus_a2,
  sum_or_squares,
  distance,
  dot,
  max_proxy,
  sum_product,
  g_sum,
  g_plus_c,
  rudnev_ratio,
  eq2_check,
  sandwich_check,
};

struct StatisticInfo {
  Statistic stat;
  std::string_view name;
  std::string_view claim;
  bool uses_polynomial;
  bool uses_d;
};

inline constexpr StatisticInfo statistic_table[] = {
    {Statistic::value_set, "value_set", "three-variable quadratic expander: |f(AxBxC)| >> min(N^{3/2}, q)", true, false},
    {Statistic::energy, "energy", "Cauchy-Schwarz: |A|^2|B|^2|C|^2 <= E |f(AxBxC)|", true, false},
    {Statistic::a_plus_a2, "a_plus_a2", "|A + A^2| >> N^{6/5}", false, false},
    {Statistic::sum_or_squares, "sum_or_squares", "max(|A + A|, |A^2 + A^2|) >> N^{6/5}", false, false},
    {Statistic::distance, "distance", "distance set of A^d: |Delta(A^d)| >> min(N^{2 - 1/2^{d-1}}, q)", false, true},
    {Statistic::dot, "dot", "dot-product set of A^d: |Pi(A^d)| >> min(N^{2 - 1/2^{d-1}}, q)", false, true},
    {Statistic::max_proxy, "max_proxy",
     "max(|Pi(A^d)|, |Delta(A^d)|) >> N^{2 - 1/(5*2^{d-3})}, pure-tower pointwise-max proxy", false, true},
    {Statistic::sum_product, "sum_product", "max(|A - A|, |A.A|) >> N^{6/5}", false, false},
    {Statistic::g_sum, "g_sum", "iterated quadratic sums: |G_d(A^{2d})| >> min(N^{2 - 1/2^{d-1}}, q)", false, true},
    {Statistic::g_plus_c, "g_plus_c", "|g(AxA) + C| >> min(N |C|^{1/2}, q)", false, false},
    {Statistic::rudnev_ratio, "rudnev_ratio", "point-plane incidences: I(R,S) << |R|^{1/2}|S| + k|S|", true, false},
    {Statistic::eq2_check, "eq2_check", "#{(x-y)^2 + z = t} on (A+A^2) x A^2 x A x (A+A^2) >= N^3", false, false},
    {Statistic::sandwich_check, "sandwich_check", "incidences vs energy: I <= E <= 4I", true, false},
};

inline const StatisticInfo& info(Statistic s) {
  for (const auto& i : statistic_table) {
    if (i.stat == s) return i;
  }
  throw Error(Errc::invalid_argument, "unknown statistic");
}

inline std::string_view to_string(Statistic s) { return info(s).name; }

inline Statistic parse_statistic(std::string_view name) {
  for (const auto& i : statistic_table) {
    if (i.name == name) return i.stat;
  }
  throw Error(Errc::parse, "unknown statistic '" + std::string(name) + "'");
}

inline Domain parse_domain(std::string_view s) {
  if (s == "prime") return Domain::prime_field;
  if (s == "extension") return Domain::quadratic_extension;
  if (s == "integers") return Domain::integer_line;
  throw Error(Errc::parse, "unknown domain '" + std::string(s) + "'");
}

inline FieldSpec make_field(Domain d, std::uint64_t p) {
  switch (d) {
    case Domain::prime_field: return FieldSpec::prime(p);
    case Domain::quadratic_extension: return FieldSpec::extension(p);
    case Domain::integer_line: return FieldSpec::integers();
  }
  throw Error(Errc::invalid_argument, "unknown domain");
}

struct ExperimentConfig {
  std::string id;
  Statistic statistic = Statistic::value_set;
  Domain domain = Domain::prime_field;
  std::vector<std::uint64_t> ps;  // ignored on the integer line
  std::vector<std::uint64_t> ns;
  std::vector<int> ds{1};
  GeneratorSpec generator;        // n and seed are filled per row
  std::string polynomial;         // Quad3 text for value_set, energy, rudnev_ratio, sandwich_check
  std::vector<std::string> gs;    // Quad2 texts for g_sum (cycled) and g_plus_c (first)
  std::optional<ConstructionKind> construction;  // default: chosen by classify
  bool shared_sets = true;        // A = B = C, or three independent draws
  std::uint64_t instances = 1;
  std::uint64_t seed = 0;
  EvalBudget budget;
  double wall_budget_s = 60.0;
};

struct ExperimentReport {
  std::string experiment_id;
  Domain domain = Domain::prime_field;
  std::uint64_t p = 0;
  std::string generator;
  std::uint64_t n = 0;
  std::optional<int> d;
  std::string statistic;
  std::string claim;
  std::optional<std::uint64_t> cardinality;
  double predicted = 0;
  double ratio = 0;
  bool saturated = false;
  std::uint64_t seed = 0;      // master seed
  std::uint64_t instance = 0;  // index within the (p, N, d) cell
  double wall_ms = 0;
  std::optional<std::string> error;
  std::vector<std::pair<std::string, std::uint64_t>> counts;  // supporting exact counts

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

namespace detail {

struct Measurement {
  std::uint64_t cardinality = 0;
  double predicted = 0;
  double ratio = 0;
  bool saturated = false;
  std::vector<std::pair<std::string, std::uint64_t>> counts;
};

/// N^exponent, capped at the field size when the domain is finite.
inline double growth_bound(const FieldSpec& f, double n, double exponent) {
  const double raw = std::pow(n, exponent);
  return f.is_finite() ? std::min(raw, static_cast<double>(f.order())) : raw;
}

inline Measurement ratio_against(const FieldSpec& f, std::uint64_t card, double predicted) {
  Measurement m;
  m.cardinality = card;
  m.predicted = predicted;
  m.ratio = predicted > 0 ? static_cast<double>(card) / predicted : 0.0;
  m.saturated = f.is_finite() && card == f.order();
  return m;
}

inline std::vector<Quad2> g_sequence(const ExperimentConfig& cfg, const FieldSpec& f, int d) {
  if (cfg.gs.empty()) throw Error(Errc::invalid_argument, "g_sum needs a non-empty gs list");
  std::vector<Quad2> out;
  for (int i = 0; i < d; ++i) out.push_back(parse_quad2(f, cfg.gs[static_cast<std::size_t>(i) % cfg.gs.size()]));
  return out;
}

inline Measurement measure(const ExperimentConfig& cfg, const FieldSpec& f, int d, const ESet& a, const ESet& b,
                           const ESet& c) {
  const double n = static_cast<double>(a.size());
  const auto poly = [&] { return parse_quad3(f, cfg.polynomial); };
  switch (cfg.statistic) {
    case Statistic::value_set: {
      const auto vs = value_set(poly(), a, b, c, cfg.budget);
      return ratio_against(f, vs.size(), growth_bound(f, n, 1.5));
    }
    case Statistic::energy: {
      const auto r = energy(poly(), a, b, c, cfg.budget);
      // Cauchy-Schwarz lower bound on E: |A|^2|B|^2|C|^2 / |f(AxBxC)|.
      const double triples = static_cast<double>(r.value_histogram_size);
      Measurement m;
      m.cardinality = r.energy;
      m.predicted = r.value_set_size ? triples * triples / static_cast<double>(r.value_set_size) : 0.0;
      m.ratio = m.predicted > 0 ? static_cast<double>(r.energy) / m.predicted : 0.0;
      m.counts = {{"value_set_size", r.value_set_size},
                  {"triples", r.value_histogram_size},
                  {"cauchy_schwarz_holds", r.cauchy_schwarz_holds() ? 1u : 0u}};
      return m;
    }
    case Statistic::a_plus_a2:
      return ratio_against(f, sumset(a, image(a, Univariate::square())).size(), std::pow(n, 1.2));
    case Statistic::sum_or_squares: {
      const auto sq = image(a, Univariate::square());
      const std::uint64_t plus = sumset(a, a).size(), squares = sumset(sq, sq).size();
      auto m = ratio_against(f, std::max(plus, squares), std::pow(n, 1.2));
      m.counts = {{"a_plus_a", plus}, {"squares_plus_squares", squares}};
      return m;
    }
    case Statistic::distance:
    case Statistic::dot:
    case Statistic::max_proxy: {
      const auto stat = cfg.statistic == Statistic::distance ? GrowthStatistic::distance
                        : cfg.statistic == Statistic::dot    ? GrowthStatistic::dot
                                                             : GrowthStatistic::max_of_both;
      const GrowthRow row = growth_table(a, d, stat).back();
      auto m = ratio_against(f, row.cardinality, growth_bound(f, n, to_double(row.predicted_exponent)));
      if (row.distance_cardinality) m.counts = {{"distance", *row.distance_cardinality}, {"dot", *row.dot_cardinality}};
      return m;
    }
    case Statistic::sum_product: {
      const auto sp = sum_product_pair(a);
      auto m = ratio_against(f, sp.max, std::pow(n, 1.2));
      m.counts = {{"difference", sp.difference}, {"product", sp.product}};
      return m;
    }
    case Statistic::g_sum: {
      const auto gs = g_sequence(cfg, f, d);
      return ratio_against(f, iterated_g_sum(gs, a).size(), growth_bound(f, n, to_double(tower_exponent(d))));
    }
    case Statistic::g_plus_c: {
      const auto g = g_sequence(cfg, f, 1).front();
      const double bound = n * std::sqrt(static_cast<double>(b.size()));
      return ratio_against(f, g_plus_c(g, a, b).size(),
                           f.is_finite() ? std::min(bound, static_cast<double>(f.order())) : bound);
    }
    case Statistic::rudnev_ratio: {
      Construction con;
      if (cfg.construction) {
        con = build(*cfg.construction, poly(), a, b, c);
      } else {
        const auto li = lemma_instance(poly(), a, b, c);
        con = build(li.kind, li.poly, li.a, li.b, li.c);
      }
      const auto rep = rudnev_report(f, con.points, con.planes, con.k_construction);
      Measurement m;
      m.cardinality = rep.incidences;
      m.predicted = rep.bound;
      m.ratio = rep.ratio;
      m.counts = {{"points", rep.points},         {"planes", rep.planes},
                  {"k_star", rep.k_star},         {"k_used", rep.k_used},
                  {"k_construction", con.k_construction}};
      return m;
    }
    case Statistic::eq2_check: {
      const auto q = count_eq2_quadruples(a, cfg.budget);
      Measurement m;
      m.cardinality = q.count;
      m.predicted = static_cast<double>(q.threshold);
      m.ratio = q.threshold ? static_cast<double>(q.count) / m.predicted : 0.0;
      m.counts = {{"threshold", q.threshold}, {"holds", q.holds() ? 1u : 0u}};
      return m;
    }
    case Statistic::sandwich_check: {
      Quad3 f3 = poly();
      ESet aa = a, bb = b, cc = c;
      ConstructionKind kind = ConstructionKind::partial_mixed;
      if (cfg.construction) {
        kind = *cfg.construction;
      } else {
        auto li = lemma_instance(f3, a, b, c);
        kind = li.kind;
        f3 = li.poly;
        aa = li.a;
        bb = li.b;
        cc = li.c;
      }
      const auto s = sandwich_check(f3, aa, bb, cc, kind, cfg.budget);
      Measurement m;
      m.cardinality = s.energy;
      m.predicted = static_cast<double>(s.incidences);
      m.ratio = s.incidences ? static_cast<double>(s.energy) / m.predicted : 0.0;
      m.counts = {{"incidences", s.incidences}, {"holds", s.holds ? 1u : 0u}, {"excluded_x", s.excluded_x ? 1u : 0u},
                  {"excluded_zero_slice", s.excluded_zero_slice ? 1u : 0u}};
      return m;
    }
  }
  throw Error(Errc::invalid_argument, "unknown statistic");
}

struct RowTask {
  std::uint64_t p;
  std::uint64_t n;
  int d;
  std::uint64_t instance;
};

inline std::vector<RowTask> plan_rows(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> ps = cfg.ps;
  if (cfg.domain == Domain::integer_line) ps = {0};
  std::vector<int> ds = info(cfg.statistic).uses_d ? cfg.ds : std::vector<int>{1};
  std::vector<std::uint64_t> ns = cfg.ns;
  if (cfg.generator.kind == GeneratorKind::subfield) ns = {0};
  std::vector<RowTask> rows;
  for (auto p : ps)
    for (auto n : ns)
      for (auto d : ds)
        for (std::uint64_t i = 0; i < cfg.instances; ++i) rows.push_back({p, n, d, i});
  return rows;
}

inline ExperimentReport run_row(const ExperimentConfig& cfg, const RowTask& task) {
  ExperimentReport rep;
  rep.experiment_id = cfg.id;
  rep.domain = cfg.domain;
  rep.p = task.p;
  rep.generator = describe(cfg.generator);
  rep.n = task.n;
  if (info(cfg.statistic).uses_d) rep.d = task.d;
  rep.statistic = std::string(to_string(cfg.statistic));
  rep.claim = std::string(info(cfg.statistic).claim);
  rep.seed = cfg.seed;
  rep.instance = task.instance;

  const auto start = std::chrono::steady_clock::now();
  try {
    ScopedDeadline deadline(std::chrono::duration<double>(cfg.wall_budget_s));
    const FieldSpec field = make_field(cfg.domain, task.p);
    const std::uint64_t instance_seed = derive_seed(cfg.seed, task.instance);
    GeneratorSpec g = cfg.generator;
    g.n = task.n;
    std::array<ESet, 3> sets{ESet(field), ESet(field), ESet(field)};
    for (std::uint64_t k = 0; k < 3; ++k) {
      if (cfg.shared_sets && k > 0) {
        sets[k] = sets[0];
        continue;
      }
      g.seed = derive_seed(instance_seed, k);
      sets[k] = generate(g, field);
    }
    if (cfg.generator.kind == GeneratorKind::subfield) rep.n = sets[0].size();
    const Measurement m = measure(cfg, field, task.d, sets[0], sets[1], sets[2]);
    rep.cardinality = m.cardinality;
    rep.predicted = m.predicted;
    rep.ratio = m.ratio;
    rep.saturated = m.saturated;
    rep.counts = m.counts;
  } catch (const Error& e) {
    rep.error = e.what();
  } catch (const std::bad_alloc&) {
    rep.error = "resource-bound: out of memory";
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace detail

/// Runs every row of every experiment. Rows run on up to `jobs` threads and
/// are returned in configured order; instance seeds depend only on the master
/// seed and the instance index, so results do not depend on `jobs`.
inline std::vector<ExperimentReport> run_experiments(const std::vector<ExperimentConfig>& configs, unsigned jobs = 1) {
  std::vector<std::pair<const ExperimentConfig*, detail::RowTask>> tasks;
  for (const auto& cfg : configs) {
    for (const auto& t : detail::plan_rows(cfg)) tasks.emplace_back(&cfg, t);
  }
  std::vector<ExperimentReport> out(tasks.size());
  jobs = std::max(1u, jobs);
  if (jobs == 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = detail::run_row(*tasks[i].first, tasks[i].second);
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = detail::run_row(*tasks[i].first, tasks[i].second);
  };
  std::vector<std::jthread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  pool.clear();
  return out;
}

inline std::vector<ExperimentReport> run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1) {
  return run_experiments({cfg}, jobs);
}

}  // namespace fflab
