#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace symsq {

enum class ActionKind { Cyclic, CoordinatePermutation, GraphIsomorphism, ExplicitPartition };

inline const char *to_string(ActionKind k) {
  switch (k) {
  case ActionKind::Cyclic: return "cyclic";
  case ActionKind::CoordinatePermutation: return "coordinate-permutation";
  case ActionKind::GraphIsomorphism: return "graph-isomorphism";
  case ActionKind::ExplicitPartition: return "explicit-partition";
  }
  return "?";
}

/// A group acting on indices [0, domain_size) through generator index maps.
/// Orbit enumeration never multiplies group elements, so generators are all
/// that is stored.
struct GroupAction {
  ActionKind kind = ActionKind::ExplicitPartition;
  int n = 0;                     // bit width when the domain is {0,1}^n, else 0
  std::size_t domain_size = 0;
  std::vector<std::vector<std::uint32_t>> generators;

  void validate() const {
    if (domain_size == 0)
      throw std::invalid_argument("GroupAction: empty domain");
    for (const auto &g : generators) {
      if (g.size() != domain_size)
        throw std::invalid_argument("GroupAction: generator size mismatch");
      std::vector<std::uint8_t> seen(domain_size, 0);
      for (auto y : g) {
        if (y >= domain_size || seen[y])
          throw std::invalid_argument("GroupAction: generator is not a bijection");
        seen[y] = 1;
      }
    }
  }
};

/// Disjoint orbit blocks covering [0, domain_size). Blocks are sorted by
/// their smallest element and sorted internally, so ids are reproducible.
struct OrbitPartition {
  std::size_t domain_size = 0;
  std::vector<std::vector<std::uint32_t>> blocks;
  std::vector<std::uint32_t> orbit_of; // index -> block id

  std::size_t orbit_count() const { return blocks.size(); }
};

/// Size statistics of an orbit partition. sum_sq_sizes keeps the exact
/// integer numerator of ||p||_2^2 = sum_k |O_k|^2 / |X|^2.
struct OrbitStats {
  std::size_t domain_size = 0;
  std::size_t orbit_count = 0;
  std::size_t max_orbit = 0;
  std::uint64_t sum_sq_sizes = 0;
  double p_norm_sq = 0.0;
  std::vector<std::size_t> sizes; // ascending
};

namespace detail {

inline std::uint32_t rotate_left_bits(std::uint32_t x, int n) {
  const std::uint32_t mask = (n == 32) ? 0xffffffffu : ((1u << n) - 1u);
  return ((x << 1) | (x >> (n - 1))) & mask;
}

/// Index map on {0,1}^n induced by a permutation of bit positions:
/// bit p of the input becomes bit pos[p] of the output.
inline std::vector<std::uint32_t> position_permutation_map(const std::vector<int> &pos, int n) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::uint32_t> map(size);
  for (std::uint32_t x = 0; x < size; ++x) {
    std::uint32_t y = 0;
    for (int p = 0; p < n; ++p)
      if ((x >> p) & 1u)
        y |= 1u << pos[p];
    map[x] = y;
  }
  return map;
}

/// Index map on matrix bitstrings (width n^2, column-major) induced by a
/// vertex permutation pi: A'[i][j] = A[pi^-1(i)][pi^-1(j)].
inline std::vector<std::uint32_t> vertex_permutation_map(const std::vector<int> &pi, int n) {
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i)
    inv[pi[i]] = i;
  std::vector<int> pos(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pos[inv[j] * n + inv[i]] = j * n + i; // source cell (inv i, inv j) -> target (i, j)
  return position_permutation_map(pos, n * n);
}

} // namespace detail

/// One generator, the left rotation of bit positions.
inline GroupAction make_cyclic_action(int n) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("make_cyclic_action: n out of range [1,20]");
  GroupAction a;
  a.kind = ActionKind::Cyclic;
  a.n = n;
  a.domain_size = std::size_t{1} << n;
  std::vector<std::uint32_t> rot(a.domain_size);
  for (std::uint32_t x = 0; x < a.domain_size; ++x)
    rot[x] = detail::rotate_left_bits(x, n);
  a.generators.push_back(std::move(rot));
  a.validate();
  return a;
}

/// Full symmetric group on bit positions, generated by the transposition
/// (0 1) and the n-cycle.
inline GroupAction make_coordinate_permutation_action(int n) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("make_coordinate_permutation_action: n out of range [1,20]");
  GroupAction a;
  a.kind = ActionKind::CoordinatePermutation;
  a.n = n;
  a.domain_size = std::size_t{1} << n;
  std::vector<int> swap01(n), cycle(n);
  std::iota(swap01.begin(), swap01.end(), 0);
  if (n >= 2)
    std::swap(swap01[0], swap01[1]);
  for (int p = 0; p < n; ++p)
    cycle[p] = (p + 1) % n;
  a.generators.push_back(detail::position_permutation_map(swap01, n));
  if (n >= 3)
    a.generators.push_back(detail::position_permutation_map(cycle, n));
  a.validate();
  return a;
}

/// Vertex permutations acting simultaneously on rows and columns of the
/// adjacency matrix, i.e. on column-major matrix bitstrings of width n^2.
inline GroupAction make_graph_iso_action(int n) {
  if (n < 1 || n > 4)
    throw std::invalid_argument("make_graph_iso_action: n out of range [1,4]");
  GroupAction a;
  a.kind = ActionKind::GraphIsomorphism;
  a.n = n * n;
  a.domain_size = std::size_t{1} << (n * n);
  std::vector<int> swap01(n), cycle(n);
  std::iota(swap01.begin(), swap01.end(), 0);
  if (n >= 2)
    std::swap(swap01[0], swap01[1]);
  for (int v = 0; v < n; ++v)
    cycle[v] = (v + 1) % n;
  a.generators.push_back(detail::vertex_permutation_map(swap01, n));
  if (n >= 3)
    a.generators.push_back(detail::vertex_permutation_map(cycle, n));
  a.validate();
  return a;
}

/// Any partition of the domain arises as an orbit partition: generate with a
/// single permutation that cycles every block.
inline GroupAction make_partition_action(const std::vector<std::vector<std::uint32_t>> &blocks,
                                         std::size_t domain_size) {
  GroupAction a;
  a.kind = ActionKind::ExplicitPartition;
  a.n = 0;
  a.domain_size = domain_size;
  std::vector<std::uint8_t> covered(domain_size, 0);
  std::vector<std::uint32_t> gen(domain_size);
  for (std::uint32_t x = 0; x < domain_size; ++x)
    gen[x] = x;
  for (const auto &block : blocks) {
    if (block.empty())
      throw std::invalid_argument("make_partition_action: empty block");
    for (auto x : block) {
      if (x >= domain_size)
        throw std::invalid_argument("make_partition_action: index outside domain");
      if (covered[x])
        throw std::invalid_argument("make_partition_action: overlapping blocks");
      covered[x] = 1;
    }
    for (std::size_t k = 0; k < block.size(); ++k)
      gen[block[k]] = block[(k + 1) % block.size()];
  }
  for (std::size_t x = 0; x < domain_size; ++x)
    if (!covered[x])
      throw std::invalid_argument("make_partition_action: blocks do not cover the domain");
  a.generators.push_back(std::move(gen));
  a.validate();
  return a;
}

/// Orbits as connected components of the graph with edges x -> g(x),
/// computed by union-find over all generator edges.
inline OrbitPartition enumerate_orbits(const GroupAction &action) {
  action.validate();
  const std::size_t size = action.domain_size;
  if (size > (std::size_t{1} << 20))
    throw std::invalid_argument("enumerate_orbits: domain larger than 2^20");

  std::vector<std::uint32_t> parent(size);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&parent](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto &g : action.generators) {
    for (std::uint32_t x = 0; x < size; ++x) {
      std::uint32_t a = find(x);
      std::uint32_t b = find(g[x]);
      if (a != b)
        parent[std::max(a, b)] = std::min(a, b); // roots stay minimal
    }
  }

  OrbitPartition part;
  part.domain_size = size;
  part.orbit_of.assign(size, 0);
  std::vector<std::uint32_t> root_to_block(size, UINT32_MAX);
  for (std::uint32_t x = 0; x < size; ++x) {
    const std::uint32_t r = find(x);
    if (root_to_block[r] == UINT32_MAX) { // roots are block minima, found in ascending order
      root_to_block[r] = static_cast<std::uint32_t>(part.blocks.size());
      part.blocks.emplace_back();
    }
    part.orbit_of[x] = root_to_block[r];
    part.blocks[root_to_block[r]].push_back(x);
  }
  return part;
}

inline OrbitStats orbit_stats(const OrbitPartition &part) {
  OrbitStats s;
  s.domain_size = part.domain_size;
  s.orbit_count = part.blocks.size();
  for (const auto &block : part.blocks) {
    s.sizes.push_back(block.size());
    s.max_orbit = std::max(s.max_orbit, block.size());
    s.sum_sq_sizes += static_cast<std::uint64_t>(block.size()) * block.size();
  }
  std::sort(s.sizes.begin(), s.sizes.end());
  const double dsize = static_cast<double>(part.domain_size);
  s.p_norm_sq = static_cast<double>(s.sum_sq_sizes) / (dsize * dsize);
  return s;
}

} // namespace symsq
