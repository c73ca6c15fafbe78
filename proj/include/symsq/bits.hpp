#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace symsq {

/// A point of {0,1}^width stored as an integer index. Bit p of `value` is
/// coordinate p, so indices enumerate the domain in lexicographic order of
/// the reversed bit list.
struct BitString {
  int width = 0;                // 1 <= width <= 20
  std::uint32_t value = 0;      // value < 2^width

  BitString() = default;
  BitString(int w, std::uint32_t v) : width(w), value(v) {
    if (w < 1 || w > 20)
      throw std::invalid_argument("BitString: width out of range [1,20]");
    if (w < 32 && v >> w)
      throw std::invalid_argument("BitString: value exceeds 2^width");
  }

  int bit(int p) const { return static_cast<int>((value >> p) & 1u); }

  std::vector<int> to_bits() const {
    std::vector<int> out(width);
    for (int p = 0; p < width; ++p)
      out[p] = bit(p);
    return out;
  }

  static BitString from_bits(const std::vector<int> &bits) {
    std::uint32_t v = 0;
    for (std::size_t p = 0; p < bits.size(); ++p) {
      if (bits[p] != 0 && bits[p] != 1)
        throw std::invalid_argument("BitString: bit list entries must be 0/1");
      v |= static_cast<std::uint32_t>(bits[p]) << p;
    }
    return BitString(static_cast<int>(bits.size()), v);
  }

  friend bool operator==(const BitString &, const BitString &) = default;
};

/// Directed-graph adjacency matrix over n vertices, loops permitted.
struct AdjacencyMatrix {
  int n = 1;
  std::vector<std::uint8_t> bits; // row-major, bits[i*n + j] = A[i][j]

  AdjacencyMatrix() : bits(1, 0) {}
  AdjacencyMatrix(int n_, std::vector<std::uint8_t> entries)
      : n(n_), bits(std::move(entries)) {
    if (n < 1 || n > 4)
      throw std::invalid_argument("AdjacencyMatrix: n out of range [1,4]");
    if (bits.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("AdjacencyMatrix: expected n*n entries");
    for (auto b : bits)
      if (b > 1)
        throw std::invalid_argument("AdjacencyMatrix: entries must be 0/1");
  }

  int at(int i, int j) const { return bits[static_cast<std::size_t>(i) * n + j]; }

  friend bool operator==(const AdjacencyMatrix &, const AdjacencyMatrix &) = default;
};

/// counts[d] = number of rows of A whose row sum is d, for d = 0..n.
struct DegreeCountVector {
  std::vector<int> counts;
};

/// Elementwise mod-2 image of a DegreeCountVector.
struct ParityVector {
  std::vector<std::uint8_t> bits;

  friend bool operator==(const ParityVector &, const ParityVector &) = default;
};

/// Column-stacked vectorization: bit (i,j) of A lands at position j*n + i.
inline BitString vectorize(const AdjacencyMatrix &a) {
  std::uint32_t v = 0;
  for (int j = 0; j < a.n; ++j)
    for (int i = 0; i < a.n; ++i)
      v |= static_cast<std::uint32_t>(a.at(i, j)) << (j * a.n + i);
  return BitString(a.n * a.n, v);
}

inline AdjacencyMatrix devectorize(const BitString &x, int n) {
  if (x.width != n * n)
    throw std::invalid_argument("devectorize: width must equal n*n");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      bits[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::uint8_t>(x.bit(j * n + i));
  return AdjacencyMatrix(n, std::move(bits));
}

/// Histogram of row sums. Counting includes the diagonal entry, so a loop
/// contributes to its row's out-degree.
inline DegreeCountVector degree_counts(const AdjacencyMatrix &a) {
  DegreeCountVector c;
  c.counts.assign(static_cast<std::size_t>(a.n) + 1, 0);
  for (int i = 0; i < a.n; ++i) {
    int s = 0;
    for (int j = 0; j < a.n; ++j)
      s += a.at(i, j);
    ++c.counts[s];
  }
  return c;
}

inline ParityVector parity_reduce(const DegreeCountVector &c) {
  ParityVector p;
  p.bits.reserve(c.counts.size());
  for (int v : c.counts) {
    if (v < 0)
      throw std::invalid_argument("parity_reduce: negative count");
    p.bits.push_back(static_cast<std::uint8_t>(v & 1));
  }
  return p;
}

/// In-place unnormalized Walsh-Hadamard butterfly: out[y] = sum_x (-1)^{x.y} in[x].
inline void fwht(std::vector<double> &data) {
  const std::size_t size = data.size();
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("fwht: length must be a power of two");
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t base = 0; base < size; base += half << 1) {
      for (std::size_t k = base; k < base + half; ++k) {
        const double a = data[k];
        const double b = data[k + half];
        data[k] = a + b;
        data[k + half] = a - b;
      }
    }
  }
}

/// Boolean Fourier coefficients f_hat(y) = 2^-m sum_x (-1)^{x.y + f(x)} of a
/// truth table of length 2^m, m <= 16. For 0/1-valued f, Parseval gives
/// sum_y f_hat(y)^2 = 1.
inline std::vector<double> walsh_spectrum(const std::vector<int> &truth_table) {
  const std::size_t size = truth_table.size();
  if (size == 0 || (size & (size - 1)) != 0)
    throw std::invalid_argument("walsh_spectrum: truth table length must be a power of two");
  if (size > (1u << 16))
    throw std::invalid_argument("walsh_spectrum: truth table longer than 2^16");
  std::vector<double> signs(size);
  for (std::size_t x = 0; x < size; ++x) {
    if (truth_table[x] != 0 && truth_table[x] != 1)
      throw std::invalid_argument("walsh_spectrum: truth table entries must be 0/1");
    signs[x] = truth_table[x] ? -1.0 : 1.0;
  }
  fwht(signs);
  const double scale = 1.0 / static_cast<double>(size);
  for (auto &v : signs)
    v *= scale;
  return signs;
}

inline int dot_parity(std::uint32_t a, std::uint32_t b) {
  return std::popcount(a & b) & 1;
}

/// Mod-2 degree counts of the matrix encoded by x_a, packed with entry i at
/// bit i. Composes devectorize, degree_counts and parity_reduce.
inline std::uint32_t degree_parity_mask(std::uint32_t x_a, int n) {
  const auto parity = parity_reduce(degree_counts(devectorize(BitString(n * n, x_a), n)));
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < parity.bits.size(); ++i)
    mask |= static_cast<std::uint32_t>(parity.bits[i]) << i;
  return mask;
}

} // namespace symsq
