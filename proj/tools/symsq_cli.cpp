// Experiment runner: every library module surfaced as a reproducible
// subcommand with JSON (canonical) or CSV (tabular) output.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symsq/report.hpp"
#include "symsq/symsq.hpp"

namespace {

using namespace symsq;

struct ActionOptions {
  std::string action = "cyclic";
  int n = 3;
  std::string partition_file;
};

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

void add_action_options(CLI::App *cmd, ActionOptions &opts) {
  cmd->add_option("--action", opts.action, "Group action: cyclic|perm|graphiso|partition")
      ->check(CLI::IsMember({"cyclic", "perm", "graphiso", "partition"}));
  cmd->add_option("--n", opts.n, "Bit width (vertex count for graphiso)");
  cmd->add_option("--partition-file", opts.partition_file,
                  "Plain text partition: one block per line, whitespace-separated indices");
}

void add_output_options(CLI::App *cmd, OutputOptions &opts) {
  cmd->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts.out_path, "Write the report to this path instead of stdout");
}

GroupAction load_partition_action(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open partition file: " + path);
  std::vector<std::vector<std::uint32_t>> blocks;
  std::uint32_t max_index = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<std::uint32_t> block;
    std::uint32_t v;
    while (row >> v) {
      block.push_back(v);
      max_index = std::max(max_index, v);
    }
    if (!block.empty())
      blocks.push_back(std::move(block));
  }
  if (blocks.empty())
    throw std::invalid_argument("partition file has no blocks: " + path);
  return make_partition_action(blocks, static_cast<std::size_t>(max_index) + 1);
}

GroupAction build_action(const ActionOptions &opts) {
  if (opts.action == "cyclic")
    return make_cyclic_action(opts.n);
  if (opts.action == "perm")
    return make_coordinate_permutation_action(opts.n);
  if (opts.action == "graphiso")
    return make_graph_iso_action(opts.n);
  if (opts.partition_file.empty())
    throw std::invalid_argument("--action partition requires --partition-file");
  return load_partition_action(opts.partition_file);
}

json action_config(const ActionOptions &opts) {
  json cfg{{"action", opts.action}};
  if (opts.action == "partition")
    cfg["partition_file"] = opts.partition_file;
  else
    cfg["n"] = opts.n;
  return cfg;
}

void emit(const OutputOptions &opts, const json &report, const std::string &csv) {
  const std::string text = opts.format == "json" ? report.dump(2) + "\n" : csv;
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot open output path: " + opts.out_path);
  out << text;
}

ToleranceAdversary make_adversary(const std::string &name, const Concept &reference) {
  if (name == "exact")
    return exact_adversary();
  if (name == "grid")
    return grid_adversary();
  if (name == "null")
    return null_adversary(reference);
  if (name == "worst")
    return worst_adversary(reference);
  throw std::invalid_argument("unknown adversary: " + name);
}

Observable load_observable(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open observable file: " + path);
  json spec = json::parse(in);
  const std::size_t dim = spec.at("dim").get<std::size_t>();
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const auto &re = spec.at("real");
  const auto imag = spec.contains("imag") ? spec.at("imag") : json();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cplx(re.at(i).at(j).get<double>(),
               imag.is_null() ? 0.0 : imag.at(i).at(j).get<double>());
  return Observable(std::move(m));
}

Observable diagonal_sign_observable(std::size_t domain) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(2 * domain),
                          static_cast<Eigen::Index>(2 * domain));
  for (std::size_t x = 0; x < domain; ++x) {
    m(static_cast<Eigen::Index>(2 * x), static_cast<Eigen::Index>(2 * x)) = 1.0;
    m(static_cast<Eigen::Index>(2 * x + 1), static_cast<Eigen::Index>(2 * x + 1)) = -1.0;
  }
  return Observable(std::move(m));
}

// ---------------------------------------------------------------- orbits --

int run_orbits(const ActionOptions &act, const OutputOptions &out) {
  const auto stats = orbit_stats(enumerate_orbits(build_action(act)));
  json cfg = action_config(act);
  cfg["subcommand"] = "orbits";
  std::ostringstream csv;
  csv << "orbit_id,size\n";
  for (std::size_t k = 0; k < stats.sizes.size(); ++k)
    csv << k << "," << stats.sizes[k] << "\n";
  emit(out, make_report(cfg, 0, to_json(stats)), csv.str());
  return 0;
}

// -------------------------------------------------------------- pairwise --

int run_pairwise(const ActionOptions &act, const OutputOptions &out) {
  const auto part = enumerate_orbits(build_action(act));
  const auto report = pairwise_independence(part);
  json cfg = action_config(act);
  cfg["subcommand"] = "pairwise";
  std::ostringstream csv;
  csv << "key,value\n"
      << "independent_pairs," << report.independent_pairs << "\n"
      << "total_pairs," << report.total_pairs << "\n"
      << "fraction," << report.fraction << "\n"
      << "census_uniform," << report.census_uniform << "\n";
  emit(out, make_report(cfg, 0, to_json(report)), csv.str());
  return 0;
}

// -------------------------------------------------------------- variance --

int run_variance(const ActionOptions &act, const OutputOptions &out,
                 const std::string &observable, const std::string &observable_file,
                 const std::string &mode, std::size_t trials, std::uint64_t seed,
                 bool seed_given) {
  const auto part = enumerate_orbits(build_action(act));
  Observable obs = [&] {
    if (observable == "diagonal-sign")
      return diagonal_sign_observable(part.domain_size);
    if (observable == "tight")
      return tight_variance_observable(part);
    if (observable_file.empty())
      throw std::invalid_argument("--observable file requires --observable-file");
    return load_observable(observable_file);
  }();

  VarianceReport report;
  if (mode == "exact") {
    report = variance_of_observable(part, obs, VarianceReport::Mode::Exact);
  } else {
    if (!seed_given)
      throw std::invalid_argument("variance --mode mc requires an explicit --seed");
    report = variance_of_observable(part, obs, VarianceReport::Mode::MonteCarlo, trials, seed);
  }
  json cfg = action_config(act);
  cfg["subcommand"] = "variance";
  cfg["observable"] = observable;
  cfg["mode"] = mode;
  if (mode == "mc")
    cfg["trials"] = trials;
  std::ostringstream csv;
  csv << "mode,value,std_error,samples\n"
      << mode << "," << report.value << "," << report.std_error << "," << report.samples << "\n";
  emit(out, make_report(cfg, seed, to_json(report)), csv.str());
  return 0;
}

// ---------------------------------------------------------------- bounds --

int run_bounds(const ActionOptions &act, const OutputOptions &out, double tau) {
  const auto stats = orbit_stats(enumerate_orbits(build_action(act)));
  const auto report = lower_bounds(tau, stats);
  json cfg = action_config(act);
  cfg["subcommand"] = "bounds";
  cfg["tau"] = tau;
  std::ostringstream csv;
  csv << "key,value\n"
      << "sq_bound," << report.sq_bound << "\n"
      << "qsq_bound," << report.qsq_bound << "\n"
      << "regularity_ratio," << report.regularity_ratio << "\n"
      << "skewed," << report.skewed << "\n"
      << "tau_warning," << report.tau_warning << "\n";
  emit(out, make_report(cfg, 0, to_json(report)), csv.str());
  return 0;
}

// ----------------------------------------------------------- learn-parity --

int run_learn_parity(const OutputOptions &out, const std::string &mode, int m, int n,
                     double tau, const std::string &adversary, std::uint64_t seed) {
  json cfg{{"subcommand", "learn-parity"}, {"mode", mode},
           {"tau", tau},                   {"adversary", adversary}};
  json result;
  std::ostringstream csv;

  if (mode == "ideal") {
    cfg["m"] = m;
    const std::size_t domain = std::size_t{1} << m;
    json runs = json::array();
    std::size_t exact_recoveries = 0;
    csv << "mask,recovered,success,queries\n";
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      OracleSession session(uniform_parity_concept(m, mask), tau,
                            make_adversary(adversary, zero_concept(domain)));
      auto report = learn_parity_ideal(session, m);
      std::uint32_t got = 0;
      for (std::size_t i = 0; i < report.recovered_bits.size(); ++i)
        got |= static_cast<std::uint32_t>(report.recovered_bits[i]) << i;
      report.success = got == mask;
      exact_recoveries += report.success ? 1 : 0;
      runs.push_back(to_json(report));
      csv << mask << "," << got << "," << report.success << "," << report.query_count << "\n";
    }
    result = json{{"runs", runs},
                  {"targets", std::size_t{1} << m},
                  {"exact_recoveries", exact_recoveries}};
  } else {
    cfg["n"] = n;
    const auto sweep = run_composed_sweep(n);
    result = json{{"sweep", to_json(sweep)}};
    csv << "mask,i,expectation\n";
    for (std::size_t mask = 0; mask < sweep.expectations.size(); ++mask)
      for (std::size_t i = 0; i < sweep.expectations[mask].size(); ++i)
        csv << mask << "," << i << "," << sweep.expectations[mask][i] << "\n";
    if (n <= 2) {
      // Session-driven runs with the dense composed observables.
      json runs = json::array();
      for (std::uint32_t mask = 0; mask < (1u << (n + 1)); ++mask) {
        const auto target = ParityConcept::from_mask(n, mask);
        OracleSession session(target.as_concept(), tau,
                              make_adversary(adversary, zero_concept(target.domain_size())));
        auto report = learn_parity_composed(session, n, sweep);
        std::uint32_t got = 0;
        for (std::size_t i = 0; i < report.recovered_bits.size(); ++i)
          got |= static_cast<std::uint32_t>(report.recovered_bits[i]) << i;
        report.success = got == mask;
        runs.push_back(to_json(report));
      }
      result["runs"] = runs;
    }
  }
  emit(out, make_report(cfg, seed, result), csv.str());
  return 0;
}

// -------------------------------------------------------------- tolerance --

int run_tolerance(const OutputOptions &out, double zeta, double tau, std::size_t m,
                  std::size_t domain, const std::string &adversary, std::uint64_t seed,
                  const std::string &learner) {
  const auto cls = make_disjoint_class(domain, m, zeta);
  const auto window = tolerance_window(zeta);
  json cfg{{"subcommand", "tolerance"}, {"zeta", zeta},     {"tau", tau},
           {"m", m},                    {"domain", domain}, {"adversary", adversary},
           {"learner", learner}};

  json runs = json::array();
  std::size_t identified = 0;
  std::ostringstream csv;
  csv << "target,recovered,success,queries\n";
  for (std::size_t target = 0; target < m; ++target) {
    OracleSession session(cls.member(target), tau, make_adversary(adversary, cls.zero()));
    auto report = learner == "grouptest" ? learn_disjoint_group_test(session, cls, tau)
                                         : learn_disjoint_tournament(session, cls, tau);
    report.success = report.recovered_index == static_cast<std::int64_t>(target);
    identified += report.success ? 1 : 0;
    runs.push_back(to_json(report));
    csv << target << "," << report.recovered_index << "," << report.success << ","
        << report.query_count << "\n";
  }

  // Diagonal-query baseline under the same adversary, for the contrast.
  std::size_t baseline_correct = 0;
  for (std::size_t target = 0; target < m; ++target) {
    OracleSession session(cls.member(target), tau, make_adversary(adversary, cls.zero()));
    const auto report = learn_disjoint_sq_baseline(session, cls);
    baseline_correct += report.recovered_index == static_cast<std::int64_t>(target) ? 1 : 0;
  }

  json result{{"window", to_json(window)},
              {"runs", runs},
              {"identified", identified},
              {"targets", m},
              {"sq_baseline_accuracy",
               static_cast<double>(baseline_correct) / static_cast<double>(m)}};
  emit(out, make_report(cfg, seed, result), csv.str());
  return 0;
}

// ------------------------------------------------------------------ audit --

int run_audit(const OutputOptions &out, double zeta, double tau, std::size_t m,
              std::size_t domain, const std::string &adversary, const std::string &battery,
              std::size_t trials, std::uint64_t seed) {
  const auto cls = make_disjoint_class(domain, m, zeta);
  std::vector<Concept> members;
  for (std::size_t t = 0; t < m; ++t)
    members.push_back(cls.member(t));

  std::vector<BatteryQuery> queries;
  if (battery == "diag") {
    queries = random_diagonal_battery(domain, trials, seed);
  } else {
    const auto psi0 = example_state(cls.zero());
    for (std::size_t t = 0; t < m; ++t)
      queries.push_back(qstat_battery_query(
          "helstrom[t=" + std::to_string(t) + "]",
          helstrom_observable(example_state(cls.member(t)), psi0)));
  }
  const auto report = validity_audit(make_adversary(adversary, cls.zero()), tau, members, queries);
  json cfg{{"subcommand", "audit"}, {"zeta", zeta},     {"tau", tau},
           {"m", m},                {"domain", domain}, {"adversary", adversary},
           {"battery", battery},    {"trials", queries.size()}};
  std::ostringstream csv;
  csv << "key,value\n"
      << "query_count," << report.query_count << "\n"
      << "max_violation," << report.max_violation << "\n"
      << "emitted_sound," << report.emitted_sound << "\n"
      << "target_independent," << report.target_independent << "\n"
      << "null_strategy_valid," << report.null_strategy_valid << "\n"
      << "fallback_count," << report.fallback_count << "\n";
  emit(out, make_report(cfg, seed, to_json(report)), csv.str());
  return 0;
}

// ----------------------------------------------------------------- verify --

int run_verify(const OutputOptions &out) {
  const auto results = run_acceptance_suite(std::cout);
  if (!out.out_path.empty()) {
    json arr = json::array();
    for (const auto &r : results)
      arr.push_back(to_json(r));
    json cfg{{"subcommand", "verify"}};
    std::ofstream f(out.out_path, std::ios::binary);
    f << make_report(cfg, 0, arr).dump(2) << "\n";
  }
  for (const auto &r : results)
    if (!r.pass)
      return 2;
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"symmetric statistical-query learning toolkit"};
  app.require_subcommand(1);

  ActionOptions act;
  OutputOptions output;

  auto *orbits = app.add_subcommand("orbits", "Orbit sizes and distribution statistics");
  add_action_options(orbits, act);
  add_output_options(orbits, output);

  auto *pairwise = app.add_subcommand("pairwise", "Pairwise-independence fraction and census");
  add_action_options(pairwise, act);
  add_output_options(pairwise, output);

  auto *variance = app.add_subcommand("variance", "Class variance of an observable");
  std::string observable = "diagonal-sign", observable_file, var_mode = "exact";
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  add_action_options(variance, act);
  add_output_options(variance, output);
  variance->add_option("--observable", observable, "diagonal-sign|tight|file")
      ->check(CLI::IsMember({"diagonal-sign", "tight", "file"}));
  variance->add_option("--observable-file", observable_file, "JSON matrix for --observable file");
  variance->add_option("--mode", var_mode, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
  variance->add_option("--trials", trials, "Monte Carlo sample count");
  auto *var_seed = variance->add_option("--seed", seed, "Monte Carlo seed (required for mc)");

  auto *bounds = app.add_subcommand("bounds", "Query-complexity lower-bound report");
  double tau = 0.05;
  add_action_options(bounds, act);
  add_output_options(bounds, output);
  bounds->add_option("--tau", tau, "Oracle tolerance")->required();

  auto *learn = app.add_subcommand("learn-parity", "Parity learners: ideal and composed");
  std::string learn_mode = "ideal", adversary = "exact";
  int m = 3, n = 2;
  double learn_tau = 0.2;
  std::uint64_t learn_seed = 0;
  add_output_options(learn, output);
  learn->add_option("--mode", learn_mode, "ideal|composed")
      ->check(CLI::IsMember({"ideal", "composed"}));
  learn->add_option("--m", m, "Coordinate count for --mode ideal");
  learn->add_option("--n", n, "Graph size for --mode composed (n <= 3)");
  learn->add_option("--tau", learn_tau, "Oracle tolerance");
  learn->add_option("--adversary", adversary, "exact|grid|null|worst")
      ->check(CLI::IsMember({"exact", "grid", "null", "worst"}));
  learn->add_option("--seed", learn_seed, "Echoed in the report");

  auto *tolerance = app.add_subcommand("tolerance", "Window report and disjoint-class learning");
  double zeta = 0.2, tol_tau = 0.5;
  std::size_t tol_m = 4, domain = 20;
  std::string tol_adversary = "null", learner = "tournament";
  std::uint64_t tol_seed = 0;
  add_output_options(tolerance, output);
  tolerance->add_option("--zeta", zeta, "Support measure")->required();
  tolerance->add_option("--tau", tol_tau, "Oracle tolerance")->required();
  tolerance->add_option("--m", tol_m, "Class size");
  tolerance->add_option("--domain-size", domain, "|X|, zeta*|X| must be an integer");
  tolerance->add_option("--adversary", tol_adversary, "exact|grid|null|worst")
      ->check(CLI::IsMember({"exact", "grid", "null", "worst"}));
  tolerance->add_option("--seed", tol_seed, "Echoed in the report");
  tolerance->add_option("--learner", learner, "tournament|grouptest")
      ->check(CLI::IsMember({"tournament", "grouptest"}));

  auto *audit = app.add_subcommand("audit", "Adversary validity audit over a query battery");
  double audit_zeta = 0.2, audit_tau = 0.5;
  std::size_t audit_m = 4, audit_domain = 20, audit_trials = 50;
  std::string audit_adversary = "null", battery = "diag";
  std::uint64_t audit_seed = 0;
  add_output_options(audit, output);
  audit->add_option("--zeta", audit_zeta, "Support measure");
  audit->add_option("--tau", audit_tau, "Oracle tolerance")->required();
  audit->add_option("--m", audit_m, "Class size");
  audit->add_option("--domain-size", audit_domain, "|X|");
  audit->add_option("--adversary", audit_adversary, "exact|grid|null|worst")
      ->check(CLI::IsMember({"exact", "grid", "null", "worst"}));
  audit->add_option("--battery", battery, "diag|helstrom")
      ->check(CLI::IsMember({"diag", "helstrom"}));
  audit->add_option("--trials", audit_trials, "Diagonal battery size");
  auto *audit_seed_opt = audit->add_option("--seed", audit_seed, "Battery seed (required for diag)");

  auto *verify = app.add_subcommand("verify", "Run the full verification suite");
  add_output_options(verify, output);

  try {
    app.parse(argc, argv);
    if (orbits->parsed())
      return run_orbits(act, output);
    if (pairwise->parsed())
      return run_pairwise(act, output);
    if (variance->parsed())
      return run_variance(act, output, observable, observable_file, var_mode, trials, seed,
                          var_seed->count() > 0);
    if (bounds->parsed())
      return run_bounds(act, output, tau);
    if (learn->parsed())
      return run_learn_parity(output, learn_mode, m, n, learn_tau, adversary, learn_seed);
    if (tolerance->parsed())
      return run_tolerance(output, zeta, tol_tau, tol_m, domain, tol_adversary, tol_seed,
                           learner);
    if (audit->parsed()) {
      if (battery == "diag" && audit_seed_opt->count() == 0)
        throw std::invalid_argument("audit --battery diag requires an explicit --seed");
      return run_audit(output, audit_zeta, audit_tau, audit_m, audit_domain, audit_adversary,
                       battery, audit_trials, audit_seed);
    }
    if (verify->parsed())
      return run_verify(output);
    return 1;
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
