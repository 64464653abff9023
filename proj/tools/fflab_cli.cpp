// fflab: command-line front end for the experiment harness.
//
// Exit status: 0 when every row succeeded, 1 when some row reported an error,
// 2 on bad arguments or an unreadable config.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fflab/report.hpp"
#include "json.hpp"

namespace {

using namespace fflab;

struct CommonOptions {
  std::vector<std::uint64_t> ps;
  std::vector<std::uint64_t> ns;
  std::vector<int> ds;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  std::string domain = "prime";
  std::string generator = "random_subset";
  std::int64_t base = 2;
  std::uint64_t instances = 1;
  unsigned jobs = 1;
  std::uint64_t max_evaluations = EvalBudget{}.max_evaluations;
  double wall_budget_s = 60.0;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool grid) {
  cmd.add_option("--p", o.ps, "Field characteristic(s)");
  cmd.add_option("--seed", o.seed, "Master seed");
  cmd.add_option("--n", o.ns, "Ground-set size(s)");
  cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--out", o.out, "Output file (default: stdout)");
  if (!grid) return;
  cmd.add_option("--d", o.ds, "Dimension(s)")->check(CLI::Range(1, 62));
  cmd.add_option("--domain", o.domain, "Domain")->check(CLI::IsMember({"prime", "extension", "integers"}));
  cmd.add_option("--generator", o.generator, "Set generator")
      ->check(CLI::IsMember({"random_subset", "interval", "geometric", "subfield"}));
  cmd.add_option("--base", o.base, "Base for the geometric generator");
  cmd.add_option("--instances", o.instances, "Instances per grid cell");
  cmd.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--max-evaluations", o.max_evaluations, "Evaluation budget per row");
  cmd.add_option("--wall-budget", o.wall_budget_s, "Wall-clock budget per row, seconds")->check(CLI::PositiveNumber);
}

ExperimentConfig config_from(const CommonOptions& o, Statistic stat, std::string id) {
  ExperimentConfig cfg;
  cfg.id = std::move(id);
  cfg.statistic = stat;
  cfg.domain = parse_domain(o.domain);
  cfg.ps = o.ps.empty() ? std::vector<std::uint64_t>{10007} : o.ps;
  cfg.ns = o.ns.empty() ? std::vector<std::uint64_t>{20} : o.ns;
  if (!o.ds.empty()) cfg.ds = o.ds;
  cfg.generator.kind = parse_generator_kind(o.generator);
  cfg.generator.base = o.base;
  cfg.instances = o.instances;
  cfg.seed = o.seed;
  cfg.budget.max_evaluations = o.max_evaluations;
  cfg.wall_budget_s = o.wall_budget_s;
  return cfg;
}

int finish(const std::vector<ExperimentReport>& rows, const CommonOptions& o) {
  const Format format = parse_format(o.format);
  if (o.out.empty()) emit(rows, format, std::cout);
  else emit(rows, format, o.out);
  int status = 0;
  for (const auto& r : rows) {
    if (!r.error) continue;
    status = 1;
    std::cerr << r.experiment_id << " p=" << r.p << " N=" << r.n << " instance=" << r.instance << ": " << *r.error
              << '\n';
  }
  return status;
}

int classify_command(const std::string& poly, const CommonOptions& o) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (auto p : o.ps.empty() ? std::vector<std::uint64_t>{10007} : o.ps) {
    const auto field = FieldSpec::prime(p);
    const auto f = parse_quad3(field, poly);
    const auto v = classify(f);
    nlohmann::ordered_json j;
    j["polynomial"] = to_string(f);
    j["p"] = p;
    j["verdict"] = to_string(v.kind);
    j["route"] = v.is_expander() ? nlohmann::ordered_json(to_string(v.route)) : nlohmann::ordered_json(nullptr);
    j["permutation"] = v.perm ? nlohmann::ordered_json(to_string(*v.perm)) : nlohmann::ordered_json(nullptr);
    if (v.lambda && v.outer) {
      j["witness"] = "g(u) = " + to_string(field, *v.outer) + ", u = " + to_string(field, *v.lambda);
    } else {
      j["witness"] = nullptr;
    }
    rows.push_back(j);
  }
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw Error(Errc::io, "cannot open '" + o.out + "' for writing");
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  if (o.format == "json") {
    os << rows.dump(2) << '\n';
  } else {
    os << "polynomial,p,verdict,route,permutation,witness\n";
    for (const auto& j : rows) {
      auto cell = [&](const char* k) { return j[k].is_null() ? std::string() : j[k].get<std::string>(); };
      os << '"' << cell("polynomial") << "\"," << j["p"].get<std::uint64_t>() << ',' << cell("verdict") << ','
         << cell("route") << ',' << cell("permutation") << ",\"" << cell("witness") << "\"\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field growth experiments"};
  app.require_subcommand(1);

  CommonOptions classify_o, valueset_o, energy_o, eq2_o, incidence_o, distances_o, dots_o, sumproduct_o, run_o;
  std::string classify_poly, valueset_poly = "x*y + z", energy_poly = "x*y + z", incidence_poly = "x*y + z";
  std::string incidence_check = "rudnev", construction = "auto";
  std::vector<std::string> config_paths;

  auto* classify_cmd = app.add_subcommand("classify", "Classify a three-variable quadratic");
  classify_cmd->add_option("--poly", classify_poly, "Polynomial in x, y, z")->required();
  add_common(*classify_cmd, classify_o, false);

  auto* valueset_cmd = app.add_subcommand("valueset", "|f(A x B x C)| against min(N^{3/2}, q)");
  valueset_cmd->add_option("--poly", valueset_poly, "Polynomial in x, y, z");
  add_common(*valueset_cmd, valueset_o, true);

  auto* energy_cmd = app.add_subcommand("energy", "Collision energy of f on A x B x C");
  energy_cmd->add_option("--poly", energy_poly, "Polynomial in x, y, z");
  add_common(*energy_cmd, energy_o, true);

  auto* eq2_cmd = app.add_subcommand("eq2", "Solutions of (x - y)^2 + z = t on the auxiliary sets");
  add_common(*eq2_cmd, eq2_o, true);

  auto* incidence_cmd = app.add_subcommand("incidence", "Point-plane incidence constructions");
  incidence_cmd->add_option("--poly", incidence_poly, "Polynomial in x, y, z");
  incidence_cmd->add_option("--check", incidence_check, "Bound to test")->check(CLI::IsMember({"rudnev", "sandwich"}));
  incidence_cmd->add_option("--construction", construction, "Construction")->check(CLI::IsMember({"auto", "partial_mixed", "full_mixed"}));
  add_common(*incidence_cmd, incidence_o, true);

  auto* distances_cmd = app.add_subcommand("distances", "Distance sets of A^d");
  add_common(*distances_cmd, distances_o, true);

  auto* dots_cmd = app.add_subcommand("dots", "Dot-product sets of A^d");
  add_common(*dots_cmd, dots_o, true);

  auto* sumproduct_cmd = app.add_subcommand("sumproduct", "max(|A - A|, |A.A|)");
  add_common(*sumproduct_cmd, sumproduct_o, true);

  auto* run_cmd = app.add_subcommand("run", "Run experiments from TOML configs");
  run_cmd->add_option("configs", config_paths, "Config files")->required()->check(CLI::ExistingFile);
  add_common(*run_cmd, run_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd) return classify_command(classify_poly, classify_o);
    if (*valueset_cmd) {
      auto cfg = config_from(valueset_o, Statistic::value_set, "valueset");
      cfg.polynomial = valueset_poly;
      return finish(run_experiment(cfg, valueset_o.jobs), valueset_o);
    }
    if (*energy_cmd) {
      auto cfg = config_from(energy_o, Statistic::energy, "energy");
      cfg.polynomial = energy_poly;
      return finish(run_experiment(cfg, energy_o.jobs), energy_o);
    }
    if (*eq2_cmd) return finish(run_experiment(config_from(eq2_o, Statistic::eq2_check, "eq2"), eq2_o.jobs), eq2_o);
    if (*incidence_cmd) {
      const auto stat = incidence_check == "rudnev" ? Statistic::rudnev_ratio : Statistic::sandwich_check;
      auto cfg = config_from(incidence_o, stat, "incidence");
      cfg.polynomial = incidence_poly;
      if (construction == "partial_mixed") cfg.construction = ConstructionKind::partial_mixed;
      if (construction == "full_mixed") cfg.construction = ConstructionKind::full_mixed;
      return finish(run_experiment(cfg, incidence_o.jobs), incidence_o);
    }
    if (*distances_cmd) {
      return finish(run_experiment(config_from(distances_o, Statistic::distance, "distances"), distances_o.jobs),
                    distances_o);
    }
    if (*dots_cmd) return finish(run_experiment(config_from(dots_o, Statistic::dot, "dots"), dots_o.jobs), dots_o);
    if (*sumproduct_cmd) {
      return finish(run_experiment(config_from(sumproduct_o, Statistic::sum_product, "sumproduct"), sumproduct_o.jobs),
                    sumproduct_o);
    }
    // run: grid flags given on the command line override every loaded experiment.
    std::vector<ExperimentConfig> configs;
    for (const auto& path : config_paths) {
      for (auto& cfg : load_config(path)) configs.push_back(std::move(cfg));
    }
    for (auto& cfg : configs) {
      if (!run_o.ps.empty()) cfg.ps = run_o.ps;
      if (!run_o.ns.empty()) cfg.ns = run_o.ns;
      if (!run_o.ds.empty()) cfg.ds = run_o.ds;
      if (run_cmd->count("--seed")) cfg.seed = run_o.seed;
    }
    return finish(run_experiments(configs, run_o.jobs), run_o);
  } catch (const Error& e) {
    std::cerr << "fflab: " << e.what() << '\n';
    return 2;
  }
}
