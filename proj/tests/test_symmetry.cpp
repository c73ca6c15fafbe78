#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <vector>

#include "symsq/symmetry.hpp"

using namespace symsq;

namespace {

// Independent oracle: orbit of x by breadth-first closure under all
// generators, no union-find involved.
std::vector<std::uint32_t> bfs_orbit(const GroupAction &action, std::uint32_t start) {
  std::set<std::uint32_t> seen{start};
  std::vector<std::uint32_t> frontier{start};
  while (!frontier.empty()) {
    std::vector<std::uint32_t> next;
    for (auto x : frontier)
      for (const auto &g : action.generators)
        if (seen.insert(g[x]).second)
          next.push_back(g[x]);
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<std::size_t> orbit_sizes_by_bfs(const GroupAction &action) {
  std::vector<bool> done(action.domain_size, false);
  std::vector<std::size_t> sizes;
  for (std::uint32_t x = 0; x < action.domain_size; ++x) {
    if (done[x])
      continue;
    const auto orbit = bfs_orbit(action, x);
    for (auto y : orbit)
      done[y] = true;
    sizes.push_back(orbit.size());
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

} // namespace

TEST_CASE("cyclic action orbits are binary necklaces", "[symmetry]") {
  const auto action = make_cyclic_action(3);
  REQUIRE(action.generators.size() == 1);
  // Single generator rotates bit positions left by one.
  REQUIRE(action.generators[0][0b001] == 0b010);
  REQUIRE(action.generators[0][0b100] == 0b001);

  const auto part = enumerate_orbits(action);
  const auto stats = orbit_stats(part);
  REQUIRE(stats.sizes == std::vector<std::size_t>{1, 1, 3, 3});
  REQUIRE(orbit_sizes_by_bfs(action) == stats.sizes);
  REQUIRE(stats.sum_sq_sizes == 20);
  REQUIRE(stats.p_norm_sq == 0.3125);
  REQUIRE(stats.max_orbit == 3);
}

TEST_CASE("cyclic action at n=4", "[symmetry]") {
  const auto stats = orbit_stats(enumerate_orbits(make_cyclic_action(4)));
  REQUIRE(stats.orbit_count == 6);
  REQUIRE(stats.sizes == std::vector<std::size_t>{1, 1, 2, 4, 4, 4});
  REQUIRE(stats.sum_sq_sizes == 54);
  REQUIRE(stats.p_norm_sq == 54.0 / 256.0);
}

TEST_CASE("coordinate permutation orbits are Hamming weight classes", "[symmetry]") {
  for (int n = 2; n <= 4; ++n) {
    const auto part = enumerate_orbits(make_coordinate_permutation_action(n));
    REQUIRE(part.orbit_count() == static_cast<std::size_t>(n) + 1);
    for (std::uint32_t x = 0; x < part.domain_size; ++x)
      for (std::uint32_t y = 0; y < part.domain_size; ++y) {
        const bool same_weight = std::popcount(x) == std::popcount(y);
        REQUIRE((part.orbit_of[x] == part.orbit_of[y]) == same_weight);
      }
  }
  const auto stats = orbit_stats(enumerate_orbits(make_coordinate_permutation_action(3)));
  REQUIRE(stats.sizes == std::vector<std::size_t>{1, 1, 3, 3});
}

TEST_CASE("graph isomorphism orbit count matches Burnside", "[symmetry]") {
  // n=2: (2^4 + |swap-fixed|) / 2 = (16 + 4) / 2 = 10.
  const auto part2 = enumerate_orbits(make_graph_iso_action(2));
  REQUIRE(part2.orbit_count() == 10);
  REQUIRE(orbit_sizes_by_bfs(make_graph_iso_action(2)).size() == 10);

  // n=3: (2^9 + 3*2^5 + 2*2^3) / 6 = 104 directed graphs with loops.
  const auto part3 = enumerate_orbits(make_graph_iso_action(3));
  REQUIRE(part3.orbit_count() == 104);

  // The n=2 generator is the vertex swap acting on 4 matrix bits: it maps
  // vec(A) to vec(P A P^T). Column-major positions: (i,j) -> j*2+i.
  const auto action2 = make_graph_iso_action(2);
  REQUIRE(action2.generators.size() == 1);
  // A = [[0,1],[0,0]] has vec 0b0100 = 4; the swap moves the entry to
  // A' = [[0,0],[1,0]] with vec 0b0010 = 2.
  REQUIRE(action2.generators[0][4] == 2);
  REQUIRE(action2.generators[0][2] == 4);
}

TEST_CASE("explicit partition actions reproduce their blocks", "[symmetry]") {
  std::vector<std::vector<std::uint32_t>> blocks;
  blocks.push_back({0, 1, 2, 3});
  for (std::uint32_t x = 4; x < 16; ++x)
    blocks.push_back({x});
  const auto action = make_partition_action(blocks, 16);
  const auto part = enumerate_orbits(action);
  const auto stats = orbit_stats(part);
  REQUIRE(stats.orbit_count == 13);
  REQUIRE(stats.max_orbit == 4);
  REQUIRE(stats.sum_sq_sizes == 28);
  REQUIRE(stats.p_norm_sq == 28.0 / 256.0);

  REQUIRE_THROWS_AS(make_partition_action({{0, 1}, {1, 2}}, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(make_partition_action({{0, 1}}, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(make_partition_action({{0, 5}}, 3), std::invalid_argument);
}

TEST_CASE("orbit blocks are closed under every generator", "[symmetry]") {
  const std::vector<GroupAction> actions = {
      make_cyclic_action(4), make_coordinate_permutation_action(4), make_graph_iso_action(2),
      make_partition_action({{0, 3, 5}, {1, 2}, {4}}, 6)};
  for (const auto &action : actions) {
    const auto part = enumerate_orbits(action);
    std::size_t total = 0;
    for (const auto &block : part.blocks) {
      total += block.size();
      for (auto x : block)
        for (const auto &g : action.generators)
          REQUIRE(part.orbit_of[g[x]] == part.orbit_of[x]);
    }
    REQUIRE(total == action.domain_size);
    // Block ids ordered by smallest member.
    for (std::size_t k = 1; k < part.blocks.size(); ++k)
      REQUIRE(part.blocks[k - 1].front() < part.blocks[k].front());
  }
}

TEST_CASE("skewed partition reproduces both variance scales", "[symmetry]") {
  // An orbit of size sqrt|X| plus singletons: ||p||^2 stays at the 1/|X|
  // scale while max|O|/|X| sits at 1/sqrt|X|.
  const std::size_t domain = 256;
  std::vector<std::vector<std::uint32_t>> blocks;
  std::vector<std::uint32_t> star(16);
  std::iota(star.begin(), star.end(), 0u);
  blocks.push_back(star);
  for (std::uint32_t x = 16; x < domain; ++x)
    blocks.push_back({x});
  const auto stats = orbit_stats(enumerate_orbits(make_partition_action(blocks, domain)));
  REQUIRE(stats.sum_sq_sizes == 16 * 16 + (256 - 16));
  REQUIRE(stats.max_orbit == 16);
  // max/|X| = 1/sqrt|X| exactly.
  REQUIRE(static_cast<double>(stats.max_orbit) / static_cast<double>(domain) == 1.0 / 16.0);
  // ||p||^2 = (496/65536) is within a small factor of 1/|X| = 1/256.
  const double ratio = stats.p_norm_sq * static_cast<double>(domain);
  REQUIRE(ratio > 1.0);
  REQUIRE(ratio < 2.0);
}

TEST_CASE("generators must be bijections", "[symmetry]") {
  GroupAction bad;
  bad.kind = ActionKind::ExplicitPartition;
  bad.domain_size = 3;
  bad.generators.push_back({0, 0, 2});
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}
