#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symsq/analysis.hpp"
#include "symsq/concepts.hpp"
#include "symsq/learners.hpp"
#include "symsq/oracles.hpp"
#include "symsq/quantum.hpp"
#include "symsq/rng.hpp"
#include "symsq/symmetry.hpp"

namespace symsq {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace acceptance {

namespace detail {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string &what) {
    if (!cond) {
      ok = false;
      detail << "FAILED: " << what << "; ";
    }
  }
};

inline Observable sign_observable(std::size_t domain) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(2 * domain),
                          static_cast<Eigen::Index>(2 * domain));
  for (std::size_t x = 0; x < domain; ++x) {
    m(static_cast<Eigen::Index>(2 * x), static_cast<Eigen::Index>(2 * x)) = 1.0;
    m(static_cast<Eigen::Index>(2 * x + 1), static_cast<Eigen::Index>(2 * x + 1)) = -1.0;
  }
  return Observable(std::move(m));
}

inline OrbitPartition skewed_partition_16() {
  std::vector<std::vector<std::uint32_t>> blocks;
  blocks.push_back({0, 1, 2, 3});
  for (std::uint32_t x = 4; x < 16; ++x)
    blocks.push_back({x});
  return enumerate_orbits(make_partition_action(blocks, 16));
}

inline std::vector<double> brute_walsh(const std::vector<int> &truth) {
  const std::size_t size = truth.size();
  std::vector<double> out(size, 0.0);
  for (std::size_t y = 0; y < size; ++y) {
    double acc = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
      const int sign = dot_parity(static_cast<std::uint32_t>(x),
                                  static_cast<std::uint32_t>(y)) ^ truth[x];
      acc += sign ? -1.0 : 1.0;
    }
    out[y] = acc / static_cast<double>(size);
  }
  return out;
}

} // namespace detail

inline CriterionResult criterion_1_orbit_machinery() {
  detail::Check c;
  const auto s3 = orbit_stats(enumerate_orbits(make_cyclic_action(3)));
  c.require(s3.sizes == std::vector<std::size_t>{1, 1, 3, 3}, "cyclic n=3 sizes {1,3,3,1}");
  c.require(s3.p_norm_sq == 0.3125, "cyclic n=3 ||p||^2 = 0.3125 exactly");
  const auto s4 = orbit_stats(enumerate_orbits(make_cyclic_action(4)));
  c.require(s4.orbit_count == 6, "cyclic n=4 has 6 orbits");
  c.require(s4.sum_sq_sizes == 54 && s4.p_norm_sq == 54.0 / 256.0, "cyclic n=4 ||p||^2 = 54/256");
  const auto g2 = orbit_stats(enumerate_orbits(make_graph_iso_action(2)));
  c.require(g2.orbit_count == 10, "graph-iso n=2 has 10 orbits");
  c.detail << "cyclic3 " << s3.sum_sq_sizes << "/64, cyclic4 " << s4.sum_sq_sizes
           << "/256, graphiso2 orbits " << g2.orbit_count;
  return {1, "orbit machinery", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_2_orbit_correlation() {
  detail::Check c;
  std::size_t pairs = 0;
  const auto run = [&](const GroupAction &action) {
    const auto part = enumerate_orbits(action);
    for (std::uint32_t x = 0; x < part.domain_size; ++x)
      for (std::uint32_t y = 0; y < part.domain_size; ++y) {
        const double corr = orbit_correlation(part, x, y);
        const double want = part.orbit_of[x] == part.orbit_of[y] ? 1.0 : 0.0;
        if (corr != want) {
          c.require(false, "correlation not exactly " + std::to_string(want));
          return;
        }
        ++pairs;
      }
  };
  for (int n = 1; n <= 3; ++n) {
    run(make_cyclic_action(n));
    run(make_coordinate_permutation_action(n));
    run(make_graph_iso_action(n));
  }
  c.detail << pairs << " ordered pairs, all exactly 0/1 "
           << "(graph-iso n=3 through the exact factored marginal, class size 2^104)";
  return {2, "orbit correlation exactness", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_3_pairwise_independence() {
  detail::Check c;
  const auto run = [&](const GroupAction &action, const char *label) {
    const auto part = enumerate_orbits(action);
    const auto stats = orbit_stats(part);
    const auto rep = pairwise_independence(part);
    c.require(std::abs(rep.fraction - (1.0 - stats.p_norm_sq)) <= 1e-15,
              std::string(label) + " fraction = 1 - ||p||^2 to 1e-15");
    c.require(rep.independent_pairs == rep.total_pairs - stats.sum_sq_sizes,
              std::string(label) + " integer pair census");
    c.require(rep.census_uniform, std::string(label) + " label census uniform");
  };
  for (int n = 1; n <= 3; ++n) {
    run(make_cyclic_action(n), "cyclic");
    run(make_coordinate_permutation_action(n), "perm");
  }
  run(make_graph_iso_action(2), "graphiso2");
  run(make_graph_iso_action(3), "graphiso3");
  c.detail << "8 actions, fraction identity exact, census uniform"
           << " (graphiso3 census factored)";
  return {3, "pairwise independence", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_4_phase_kickback() {
  detail::Check c;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const std::size_t domain = std::size_t{1} << n;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << domain); ++code) {
      std::vector<int> truth(domain);
      for (std::size_t x = 0; x < domain; ++x)
        truth[x] = static_cast<int>((code >> x) & 1u);
      worst = std::max(worst, phase_kickback_decompose(truth).residual);
    }
  }
  c.require(worst <= 1e-12, "residual <= 1e-12 for every f at n <= 3");
  c.detail << "276 truth tables, max residual " << worst;
  return {4, "phase kickback", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_5_diagonal_variance() {
  detail::Check c;
  struct Row {
    GroupAction action;
    const char *label;
    bool exact_feasible;
  };
  std::vector<Row> rows;
  rows.push_back({make_cyclic_action(1), "cyclic1", true});
  rows.push_back({make_cyclic_action(2), "cyclic2", true});
  rows.push_back({make_cyclic_action(3), "cyclic3", true});
  rows.push_back({make_coordinate_permutation_action(2), "perm2", true});
  rows.push_back({make_coordinate_permutation_action(3), "perm3", true});
  rows.push_back({make_graph_iso_action(2), "graphiso2", true});
  // graph-iso n=3 has 104 orbits: the class has 2^104 members, far past the
  // exact-mode cap, so only the Monte Carlo clause applies there.
  rows.push_back({make_graph_iso_action(3), "graphiso3", false});

  for (const auto &row : rows) {
    const auto part = enumerate_orbits(row.action);
    const auto stats = orbit_stats(part);
    const auto obs = detail::sign_observable(part.domain_size);
    if (row.exact_feasible) {
      const auto exact = variance_of_observable(part, obs, VarianceReport::Mode::Exact);
      c.require(exact.value == stats.p_norm_sq,
                std::string(row.label) + " exact variance == ||p||^2");
    }
    const auto mc =
        variance_of_observable(part, obs, VarianceReport::Mode::MonteCarlo, 100000, 1234);
    c.require(std::abs(mc.value - stats.p_norm_sq) <= 0.05 * stats.p_norm_sq,
              std::string(row.label) + " Monte Carlo within 5%");
  }
  c.detail << "exact == ||p||^2 on 6 actions, MC(1e5) within 5% on 7";
  return {5, "diagonal variance", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_6_tight_variance() {
  detail::Check c;
  const auto part = detail::skewed_partition_16();
  const auto obs = tight_variance_observable(part);
  const auto mc = variance_of_observable(part, obs, VarianceReport::Mode::MonteCarlo, 100000, 77);
  c.require(std::abs(mc.value - 0.25) <= 0.0125, "skewed MC variance within 5% of 0.25");

  std::vector<GroupAction> actions = {
      make_cyclic_action(1), make_cyclic_action(2), make_cyclic_action(3), make_cyclic_action(4),
      make_coordinate_permutation_action(2), make_coordinate_permutation_action(3),
      make_coordinate_permutation_action(4), make_graph_iso_action(2), make_graph_iso_action(3)};
  bool all = true;
  for (const auto &a : actions)
    all = all && discussion_inequality_exact(orbit_stats(enumerate_orbits(a)));
  all = all && discussion_inequality_exact(orbit_stats(part));
  c.require(all, "||p||^2 <= max|O|/|X| exactly on every tested action");
  c.detail << "MC value " << mc.value << " vs 0.25; inequality exact on 10 actions";
  return {6, "tight general-observable variance", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_7_fourier_mass() {
  detail::Check c;
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const std::size_t domain = std::size_t{1} << m;
    std::vector<std::vector<std::uint32_t>> subsets;
    for (std::uint32_t s = 0; s < domain; ++s)
      subsets.push_back({s});
    subsets.push_back({});
    std::vector<std::uint32_t> all(domain);
    std::iota(all.begin(), all.end(), 0u);
    subsets.push_back(all);

    std::vector<Observable> obs;
    for (const auto &t : subsets)
      obs.push_back(fourier_mass_observable(t, m));

    for (std::uint64_t code = 0; code < (std::uint64_t{1} << domain); ++code) {
      std::vector<int> truth(domain);
      for (std::size_t x = 0; x < domain; ++x)
        truth[x] = static_cast<int>((code >> x) & 1u);
      const auto spectrum = detail::brute_walsh(truth);
      const Concept f{"table", domain, [&truth](std::uint64_t x) { return truth[x]; }};
      const auto psi = example_state(f);
      for (std::size_t k = 0; k < subsets.size(); ++k) {
        double mass = 0.0;
        for (auto s : subsets[k])
          mass += spectrum[s] * spectrum[s];
        worst = std::max(worst, std::abs(expectation(obs[k], psi) - 0.5 * mass));
      }
    }
  }
  c.require(worst <= 1e-12, "expectation == (1/2) sum f_hat^2 within 1e-12");
  c.detail << "all f at m <= 3, scale factor 1/2 measured, max deviation " << worst
           << ", claimed_scale " << fourier_mass_claimed_scale();
  return {7, "fourier mass observable", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_8_ideal_parity_learner() {
  detail::Check c;
  std::size_t runs = 0;
  for (int m = 3; m <= 4; ++m) {
    const std::size_t domain = std::size_t{1} << m;
    const std::vector<ToleranceAdversary> adversaries = {
        exact_adversary(), grid_adversary(), worst_adversary(zero_concept(domain)),
        null_adversary(zero_concept(domain))};
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      for (const auto &adv : adversaries) {
        OracleSession session(uniform_parity_concept(m, mask), 0.2, adv);
        const auto report = learn_parity_ideal(session, m);
        std::uint32_t got = 0;
        for (std::size_t i = 0; i < report.recovered_bits.size(); ++i)
          got |= static_cast<std::uint32_t>(report.recovered_bits[i]) << i;
        c.require(got == mask, "exact recovery of every target");
        c.require(report.query_count == static_cast<std::size_t>(m), "exactly m queries");
        ++runs;
      }
    }
  }
  c.detail << runs << " runs (m=3,4; all targets; exact/grid/worst/null; tau=0.2)";
  return {8, "ideal parity learner", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_9_composed_sweep() {
  detail::Check c;
  std::ostringstream gaps;
  for (int n = 2; n <= 3; ++n) {
    const auto first = run_composed_sweep(n);
    const auto second = run_composed_sweep(n);
    double dev = 0.0;
    for (std::size_t mask = 0; mask < first.expectations.size(); ++mask)
      for (std::size_t i = 0; i < first.expectations[mask].size(); ++i)
        dev = std::max(dev, std::abs(first.expectations[mask][i] - second.expectations[mask][i]));
    c.require(dev <= 1e-12, "run-to-run agreement 1e-12 at n=" + std::to_string(n));
    gaps << "n=" << n << " min gap " << first.min_gap << "; ";
  }
  c.detail << gaps.str() << "no ground-truth asserted, gaps published";
  return {9, "composed parity experiment", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_10_helstrom() {
  detail::Check c;
  const auto cls = make_disjoint_class(20, 4, 0.2);
  const auto psi_f = example_state(cls.member(0));
  const auto psi_0 = example_state(cls.zero());
  const double dist = trace_distance(psi_f, psi_0);
  c.require(std::abs(dist - 0.6) <= 1e-12, "zeta=0.2 trace distance 0.6");
  const auto obs = helstrom_observable(psi_f, psi_0);
  const double gap = expectation(obs, psi_f) - expectation(obs, psi_0);
  c.require(std::abs(gap - 1.2) <= 1e-12, "zeta=0.2 expectation gap 1.2");

  std::mt19937_64 gen(4242);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(below(gen, 15));
    auto rand_density = [&](int rank) {
      Matrix acc = Matrix::Zero(dim, dim);
      double total = 0.0;
      for (int r = 0; r < rank; ++r) {
        Vector v(dim);
        for (Eigen::Index k = 0; k < dim; ++k)
          v(k) = cplx(symmetric_double(gen), symmetric_double(gen));
        v.normalize();
        const double w = unit_double(gen) + 1e-3;
        acc += w * (v * v.adjoint());
        total += w;
      }
      return DensityOperator(acc / total);
    };
    const auto rho = rand_density(1 + static_cast<int>(below(gen, 4)));
    const auto sig = rand_density(1 + static_cast<int>(below(gen, 4)));
    const auto o = helstrom_observable(rho, sig);
    const double g = expectation(o, rho) - expectation(o, sig);
    worst = std::max(worst, std::abs(g - 2.0 * trace_distance(rho, sig)));
  }
  c.require(worst <= 1e-9, "gap == trace norm within 1e-9 on 100 random pairs");
  c.detail << "d_tr " << dist << ", gap " << gap << ", worst random-pair deviation " << worst;
  return {10, "helstrom optimality", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_11_tolerance_separation() {
  detail::Check c;
  const auto cls = make_disjoint_class(20, 4, 0.2);
  const double tau = 0.5;

  std::vector<Concept> members;
  for (std::size_t t = 0; t < cls.member_count(); ++t)
    members.push_back(cls.member(t));
  const auto audit = validity_audit(null_adversary(cls.zero()), tau, members,
                                    random_diagonal_battery(20, 50, 7));
  c.require(audit.emitted_sound, "null adversary sound on the diagonal battery");
  c.require(audit.target_independent, "answers target-independent");
  c.require(audit.null_strategy_valid && audit.fallback_count == 0, "no fallback needed");

  std::vector<std::int64_t> guesses;
  for (std::size_t target = 0; target < cls.member_count(); ++target) {
    OracleSession session(cls.member(target), tau, null_adversary(cls.zero()));
    guesses.push_back(learn_disjoint_sq_baseline(session, cls).recovered_index);
  }
  std::size_t correct = 0;
  bool constant_guess = true;
  for (std::size_t t = 0; t < guesses.size(); ++t) {
    correct += guesses[t] == static_cast<std::int64_t>(t) ? 1 : 0;
    constant_guess = constant_guess && guesses[t] == guesses[0];
  }
  c.require(constant_guess && correct == 1, "SQ baseline at exactly chance accuracy 1/4");

  for (std::size_t target = 0; target < cls.member_count(); ++target) {
    OracleSession session(cls.member(target), tau, null_adversary(cls.zero()));
    const auto report = learn_disjoint_tournament(session, cls, tau);
    c.require(report.recovered_index == static_cast<std::int64_t>(target),
              "tournament identifies target " + std::to_string(target));
    c.require(report.query_count <= 4, "at most 4 queries");
  }

  const auto window = tolerance_window(0.2);
  c.require(window.low == 0.4, "window low endpoint 0.4 exact");
  c.require(std::abs(window.high - 0.6) <= 1e-15, "window high endpoint 0.6");
  c.require(window.valid, "zeta=0.2 window nonempty");
  const auto empty = tolerance_window(0.4);
  c.require(!empty.valid, "zeta=0.4 window empty");

  c.detail << "audit sound+independent (50 queries x 4 targets), baseline 1/4, "
              "tournament 4/4, window (0.4, 0.6)";
  return {11, "tolerance separation", c.ok, c.detail.str(), 0.0};
}

inline CriterionResult criterion_12_min_trace_distance() {
  detail::Check c;
  const auto part = enumerate_orbits(make_cyclic_action(3));
  const double lowest = min_trace_distance_check(part);
  c.require(lowest >= 1.0 - std::sqrt(0.5) - 1e-9, "min_f d_tr >= 1 - sqrt(1/2)");
  c.detail << "minimum over 16 members: " << lowest << " vs bound "
           << 1.0 - std::sqrt(0.5);
  return {12, "minimum trace distance", c.ok, c.detail.str(), 0.0};
}

} // namespace acceptance

/// Runs criteria 1 through 12, printing one pass/fail line each, then the
/// closing line for the whole-suite runtime budget (criterion 13).
inline std::vector<CriterionResult> run_acceptance_suite(std::ostream &out) {
  using Clock = std::chrono::steady_clock;
  const auto suite_start = Clock::now();

  std::vector<std::function<CriterionResult()>> criteria = {
      acceptance::criterion_1_orbit_machinery,
      acceptance::criterion_2_orbit_correlation,
      acceptance::criterion_3_pairwise_independence,
      acceptance::criterion_4_phase_kickback,
      acceptance::criterion_5_diagonal_variance,
      acceptance::criterion_6_tight_variance,
      acceptance::criterion_7_fourier_mass,
      acceptance::criterion_8_ideal_parity_learner,
      acceptance::criterion_9_composed_sweep,
      acceptance::criterion_10_helstrom,
      acceptance::criterion_11_tolerance_separation,
      acceptance::criterion_12_min_trace_distance,
  };

  // Per-criterion wall-clock budgets, in seconds, where one is stated.
  const auto budget = [](int index) {
    switch (index) {
    case 1: return 1.0;
    case 2: return 10.0;
    case 8: return 5.0;
    default: return 120.0;
    }
  };

  std::vector<CriterionResult> results;
  for (auto &fn : criteria) {
    const auto start = Clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception &e) {
      r.index = static_cast<int>(results.size()) + 1;
      r.name = "criterion " + std::to_string(r.index);
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (r.pass && r.seconds >= budget(r.index)) {
      r.pass = false;
      r.detail += "; over the " + std::to_string(budget(r.index)) + " s budget";
    }
    out << (r.pass ? "PASS" : "FAIL") << "  " << r.index << "  " << r.name << "  ["
        << r.detail << "]  (" << r.seconds << " s)\n";
    results.push_back(std::move(r));
  }

  const double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
  bool all = true;
  for (const auto &r : results)
    all = all && r.pass;
  CriterionResult meta;
  meta.index = 13;
  meta.name = "full suite";
  meta.pass = all && total < 120.0;
  meta.seconds = total;
  {
    std::ostringstream d;
    d << "criteria 1-12 " << (all ? "all pass" : "with failures") << ", total " << total
      << " s against the 120 s budget";
    meta.detail = d.str();
  }
  out << (meta.pass ? "PASS" : "FAIL") << "  13  full suite  [" << meta.detail << "]  ("
      << meta.seconds << " s)\n";
  results.push_back(std::move(meta));
  return results;
}

} // namespace symsq
