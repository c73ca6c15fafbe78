#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "symsq/analysis.hpp"
#include "symsq/concepts.hpp"
#include "symsq/quantum.hpp"
#include "symsq/symmetry.hpp"

using namespace symsq;

namespace {

Observable sign_observable(std::size_t domain) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(2 * domain),
                          static_cast<Eigen::Index>(2 * domain));
  for (std::size_t x = 0; x < domain; ++x) {
    m(static_cast<Eigen::Index>(2 * x), static_cast<Eigen::Index>(2 * x)) = 1.0;
    m(static_cast<Eigen::Index>(2 * x + 1), static_cast<Eigen::Index>(2 * x + 1)) = -1.0;
  }
  return Observable(std::move(m));
}

OrbitPartition skewed_partition_16() {
  std::vector<std::vector<std::uint32_t>> blocks;
  blocks.push_back({0, 1, 2, 3});
  for (std::uint32_t x = 4; x < 16; ++x)
    blocks.push_back({x});
  return enumerate_orbits(make_partition_action(blocks, 16));
}

// Independent oracle for the variance: enumerate class members as explicit
// truth tables and average <psi_f|O|psi_f> computed through dense states.
double brute_variance(const OrbitPartition &part, const Observable &obs) {
  auto shared = std::make_shared<OrbitPartition>(part);
  double sum = 0.0, sum_sq = 0.0;
  std::size_t count = 0;
  for (const auto &f : enumerate_class(shared)) {
    const double phi = expectation(obs, example_state(f.as_concept()));
    sum += phi;
    sum_sq += phi * phi;
    ++count;
  }
  const double mean = sum / static_cast<double>(count);
  return sum_sq / static_cast<double>(count) - mean * mean;
}

} // namespace

TEST_CASE("diagonal sign variance equals the orbit norm exactly", "[analysis]") {
  struct Row {
    GroupAction action;
    double expect;
  };
  const std::vector<Row> rows = {
      {make_cyclic_action(3), 0.3125},
      {make_cyclic_action(2), (1.0 + 4.0 + 1.0) / 16.0},
      {make_coordinate_permutation_action(3), 0.3125},
      {make_graph_iso_action(2), 28.0 / 256.0},
  };
  for (const auto &row : rows) {
    const auto part = enumerate_orbits(row.action);
    const auto obs = sign_observable(part.domain_size);
    const auto report = variance_of_observable(part, obs, VarianceReport::Mode::Exact);
    REQUIRE(report.value == row.expect); // dyadic arithmetic is exact here
    REQUIRE(report.std_error == 0.0);
    REQUIRE(report.value == Catch::Approx(brute_variance(part, obs)).margin(1e-14));
    REQUIRE(report.value == orbit_stats(part).p_norm_sq);
  }
}

TEST_CASE("identity observable has zero variance", "[analysis]") {
  const auto part = enumerate_orbits(make_cyclic_action(3));
  const Observable id(Matrix::Identity(16, 16));
  REQUIRE(variance_of_observable(part, id, VarianceReport::Mode::Exact).value ==
          Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("tight observable variance is max orbit over domain", "[analysis]") {
  const auto part = skewed_partition_16();
  const auto obs = tight_variance_observable(part);
  const auto exact = variance_of_observable(part, obs, VarianceReport::Mode::Exact);
  REQUIRE(exact.value == Catch::Approx(0.25).margin(1e-12));

  const auto cyc = enumerate_orbits(make_cyclic_action(3));
  const auto exact_cyc =
      variance_of_observable(cyc, tight_variance_observable(cyc), VarianceReport::Mode::Exact);
  REQUIRE(exact_cyc.value == Catch::Approx(3.0 / 8.0).margin(1e-12));

  // Singleton-only partition: the best orbit has size 1 and Var = 1/|X|.
  std::vector<std::vector<std::uint32_t>> singletons;
  for (std::uint32_t x = 0; x < 8; ++x)
    singletons.push_back({x});
  const auto trivial = enumerate_orbits(make_partition_action(singletons, 8));
  REQUIRE(variance_of_observable(trivial, tight_variance_observable(trivial),
                                 VarianceReport::Mode::Exact)
              .value == Catch::Approx(1.0 / 8.0).margin(1e-12));
}

TEST_CASE("monte carlo variance agrees with exact within 5 percent", "[analysis]") {
  const auto part = skewed_partition_16();
  const auto obs = tight_variance_observable(part);
  const auto mc =
      variance_of_observable(part, obs, VarianceReport::Mode::MonteCarlo, 100000, 2024);
  REQUIRE(std::abs(mc.value - 0.25) <= 0.0125);
  REQUIRE(mc.samples == 100000);

  const auto cyc = enumerate_orbits(make_cyclic_action(3));
  const auto mc2 = variance_of_observable(cyc, sign_observable(8),
                                          VarianceReport::Mode::MonteCarlo, 100000, 99);
  REQUIRE(std::abs(mc2.value - 0.3125) <= 0.0157);
}

TEST_CASE("monte carlo lands within three standard errors most of the time", "[analysis]") {
  const auto part = enumerate_orbits(make_cyclic_action(3));
  const auto obs = sign_observable(8);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto mc =
        variance_of_observable(part, obs, VarianceReport::Mode::MonteCarlo, 4000, seed);
    if (std::abs(mc.value - 0.3125) <= 3.0 * mc.std_error)
      ++hits;
  }
  REQUIRE(hits >= 95);
}

TEST_CASE("exact variance rejects oversized classes", "[analysis]") {
  const auto part = enumerate_orbits(make_graph_iso_action(3)); // 104 orbits
  const auto obs = sign_observable(part.domain_size);
  REQUIRE_THROWS_AS(variance_of_observable(part, obs, VarianceReport::Mode::Exact),
                    std::invalid_argument);
  // Monte Carlo still applies through the diagonal fast path.
  const auto mc = variance_of_observable(part, obs, VarianceReport::Mode::MonteCarlo, 20000, 5);
  REQUIRE(std::abs(mc.value - orbit_stats(part).p_norm_sq) <= 0.05 * orbit_stats(part).p_norm_sq +
                                                                 3.0 * mc.std_error);
}

TEST_CASE("pairwise independence fraction is one minus the orbit norm", "[analysis]") {
  for (const auto &action : {make_cyclic_action(3), make_coordinate_permutation_action(3)}) {
    const auto part = enumerate_orbits(action);
    const auto stats = orbit_stats(part);
    const auto report = pairwise_independence(part);
    REQUIRE(report.census_enumerated);
    REQUIRE(report.census_uniform);
    // Integer identity: independent = |X|^2 - sum |O_k|^2.
    REQUIRE(report.independent_pairs ==
            report.total_pairs - stats.sum_sq_sizes);
    REQUIRE(std::abs(report.fraction - (1.0 - stats.p_norm_sq)) <= 1e-15);
  }
  const auto cyc3 = pairwise_independence(enumerate_orbits(make_cyclic_action(3)));
  REQUIRE(cyc3.fraction == 1.0 - 0.3125);
}

TEST_CASE("pairwise independence on the trivial group", "[analysis]") {
  std::vector<std::vector<std::uint32_t>> singletons;
  for (std::uint32_t x = 0; x < 16; ++x)
    singletons.push_back({x});
  const auto part = enumerate_orbits(make_partition_action(singletons, 16));
  const auto report = pairwise_independence(part);
  REQUIRE(report.fraction == 1.0 - 1.0 / 16.0);
  REQUIRE(report.census_uniform);
}

TEST_CASE("pairwise census is factored exactly for giant classes", "[analysis]") {
  const auto part = enumerate_orbits(make_graph_iso_action(3)); // class size 2^104
  const auto stats = orbit_stats(part);
  const auto report = pairwise_independence(part);
  REQUIRE_FALSE(report.census_enumerated);
  REQUIRE(report.census_uniform);
  REQUIRE(report.independent_pairs == report.total_pairs - stats.sum_sq_sizes);
}

TEST_CASE("orbit correlation is exactly one or zero", "[analysis]") {
  const auto part = enumerate_orbits(make_cyclic_action(3));
  REQUIRE(orbit_correlation(part, 0b001, 0b100) == 1.0);
  REQUIRE(orbit_correlation(part, 0b001, 0b011) == 0.0);
  REQUIRE(orbit_correlation(part, 5, 5) == 1.0);

  for (const auto &action : {make_cyclic_action(3), make_coordinate_permutation_action(3),
                             make_graph_iso_action(2)}) {
    const auto p = enumerate_orbits(action);
    for (std::uint32_t x = 0; x < p.domain_size; ++x)
      for (std::uint32_t y = 0; y < p.domain_size; ++y) {
        const double c = orbit_correlation(p, x, y);
        if (p.orbit_of[x] == p.orbit_of[y])
          REQUIRE(c == 1.0);
        else
          REQUIRE(c == 0.0);
      }
  }
}

TEST_CASE("orbit correlation factored path matches enumeration", "[analysis]") {
  // The factored marginal and the explicit class loop are two routes to the
  // same integer sum; compare them where both are feasible.
  const auto part = enumerate_orbits(make_graph_iso_action(2)); // 10 orbits, honest loop
  for (std::uint32_t x = 0; x < 16; ++x)
    for (std::uint32_t y = 0; y < 16; ++y) {
      const double via_enumeration = orbit_correlation(part, x, y);
      const double via_marginal = part.orbit_of[x] == part.orbit_of[y] ? 1.0 : 0.0;
      REQUIRE(via_enumeration == via_marginal);
    }
  // Giant class: the factored path applies and stays exact.
  const auto huge = enumerate_orbits(make_graph_iso_action(3));
  REQUIRE(orbit_correlation(huge, 0, 0) == 1.0);
  bool found_cross = false;
  for (std::uint32_t y = 1; y < huge.domain_size && !found_cross; ++y)
    if (huge.orbit_of[y] != huge.orbit_of[0]) {
      REQUIRE(orbit_correlation(huge, 0, y) == 0.0);
      found_cross = true;
    }
  REQUIRE(found_cross);
}

TEST_CASE("lower bounds arithmetic at cyclic n=3", "[analysis]") {
  const auto stats = orbit_stats(enumerate_orbits(make_cyclic_action(3)));
  const auto report = lower_bounds(0.05, stats);
  REQUIRE(report.sq_bound == Catch::Approx(0.008).margin(1e-15));
  REQUIRE(report.qsq_bound == Catch::Approx(0.0025 * 8.0 / 3.0).margin(1e-15));
  REQUIRE(report.regularity_ratio == Catch::Approx(0.3125 * 8.0 / 3.0).margin(1e-15));
  REQUIRE_FALSE(report.skewed);
  REQUIRE_FALSE(report.tau_warning);

  const auto warned = lower_bounds(0.2, stats);
  REQUIRE(warned.tau_warning);
}

TEST_CASE("lower bounds flag skewed orbit structures", "[analysis]") {
  const auto stats = orbit_stats(skewed_partition_16());
  const auto report = lower_bounds(0.05, stats);
  REQUIRE(report.regularity_ratio == Catch::Approx(0.109375 * 16.0 / 4.0).margin(1e-15));
  REQUIRE(report.skewed);

  // |X| = 2^12 with a sqrt-size orbit: the ratio collapses toward 2^-6.
  std::vector<std::vector<std::uint32_t>> blocks;
  std::vector<std::uint32_t> star(64);
  std::iota(star.begin(), star.end(), 0u);
  blocks.push_back(star);
  for (std::uint32_t x = 64; x < 4096; ++x)
    blocks.push_back({x});
  const auto big = orbit_stats(enumerate_orbits(make_partition_action(blocks, 4096)));
  const auto big_report = lower_bounds(0.05, big);
  REQUIRE(big_report.regularity_ratio < 0.05);
  REQUIRE(big_report.skewed);
}

TEST_CASE("discussion inequality holds for every action at n<=4", "[analysis]") {
  std::vector<GroupAction> actions = {
      make_cyclic_action(1),  make_cyclic_action(2), make_cyclic_action(3),
      make_cyclic_action(4),  make_coordinate_permutation_action(2),
      make_coordinate_permutation_action(3), make_coordinate_permutation_action(4),
      make_graph_iso_action(2), make_partition_action({{0, 1, 2}, {3}}, 4)};
  for (const auto &action : actions) {
    const auto stats = orbit_stats(enumerate_orbits(action));
    REQUIRE(discussion_inequality_exact(stats));
  }
}

TEST_CASE("tolerance window endpoints", "[analysis]") {
  const auto w = tolerance_window(0.2);
  REQUIRE(w.low == 0.4);
  REQUIRE(w.high == Catch::Approx(0.6).margin(1e-15));
  REQUIRE(w.valid);

  const auto empty = tolerance_window(0.4);
  REQUIRE(empty.low == 0.8);
  REQUIRE(empty.high == Catch::Approx(0.8).margin(1e-15));
  REQUIRE_FALSE(empty.valid);

  const auto tiny = tolerance_window(1e-6);
  REQUIRE(tiny.low < tiny.high);
  REQUIRE(tiny.valid);

  REQUIRE_THROWS_AS(tolerance_window(0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(tolerance_window(1.0), std::invalid_argument);
}

TEST_CASE("average correlation closed forms at dimension two", "[analysis]") {
  Matrix half = 0.5 * Matrix::Identity(2, 2);
  const DensityOperator sigma(half);

  Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e1(1, 1) = 1.0;
  const std::vector<DensityOperator> pair = {DensityOperator(e0), DensityOperator(e1)};
  REQUIRE(average_correlation(pair, sigma) == Catch::Approx(1.0).margin(1e-12));

  const std::vector<DensityOperator> self = {sigma};
  REQUIRE(average_correlation(self, sigma) == Catch::Approx(0.0).margin(1e-12));

  const std::vector<DensityOperator> single = {DensityOperator(e0)};
  REQUIRE(average_correlation(single, sigma) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("average correlation rejects support leakage", "[analysis]") {
  Matrix sigma_m = Matrix::Zero(4, 4);
  sigma_m(0, 0) = 0.5;
  sigma_m(1, 1) = 0.5;
  const DensityOperator sigma(sigma_m);
  Matrix leak = Matrix::Zero(4, 4);
  leak(3, 3) = 1.0;
  REQUIRE_THROWS_AS(average_correlation({DensityOperator(leak)}, sigma),
                    std::invalid_argument);
}

TEST_CASE("average correlation on a rank-deficient class mixture", "[analysis]") {
  // Class mixtures live on a proper subspace of C^(2|X|); the pseudo-inverse
  // route has to handle that without blowing up.
  auto part = std::make_shared<const OrbitPartition>(enumerate_orbits(make_cyclic_action(2)));
  std::vector<StateVector> states;
  std::vector<DensityOperator> family;
  for (const auto &f : enumerate_class(part)) {
    states.push_back(example_state(f.as_concept()));
    family.push_back(pure_density(states.back()));
  }
  const auto sigma = mixture_density(states);
  const double gamma = average_correlation(family, sigma);
  REQUIRE(gamma >= 0.0);
  REQUIRE(std::isfinite(gamma));
}

TEST_CASE("minimum trace distance clears the reduction threshold", "[analysis]") {
  const auto part = enumerate_orbits(make_cyclic_action(3));
  const double lowest = min_trace_distance_check(part);
  REQUIRE(lowest >= 1.0 - std::sqrt(0.5) - 1e-9);

  // Sampled mode on the trivial action at n=3: the class is every Boolean
  // function on 8 points.
  std::vector<std::vector<std::uint32_t>> singletons;
  for (std::uint32_t x = 0; x < 8; ++x)
    singletons.push_back({x});
  const auto trivial = enumerate_orbits(make_partition_action(singletons, 8));
  const double sampled = min_trace_distance_check(trivial, 1000, 31);
  REQUIRE(sampled >= 1.0 - std::sqrt(0.5) - 1e-9);

  std::vector<std::vector<std::uint32_t>> one_block;
  one_block.push_back({0, 1});
  const auto degenerate = enumerate_orbits(make_partition_action(one_block, 2));
  REQUIRE_THROWS_AS(min_trace_distance_check(degenerate), std::invalid_argument);
}
