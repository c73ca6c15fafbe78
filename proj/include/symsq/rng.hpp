#pragma once

#include <cstdint>
#include <random>

namespace symsq {

/// Deterministic draws on top of std::mt19937_64.
///
/// The standard distribution adaptors are implementation-defined, so reports
/// seeded with the same value could differ across standard libraries. These
/// helpers map raw engine words to bits and doubles directly, which keeps
/// every seeded run byte-identical on any conforming platform.
inline int fair_bit(std::mt19937_64 &gen) {
  return static_cast<int>(gen() >> 63);
}

/// Uniform double in [0, 1) with 53 random mantissa bits.
inline double unit_double(std::mt19937_64 &gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-1, 1].
inline double symmetric_double(std::mt19937_64 &gen) {
  return 2.0 * unit_double(gen) - 1.0;
}

/// Uniform integer in [0, bound) by rejection, bound >= 1.
inline std::uint64_t below(std::mt19937_64 &gen, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t word = gen();
  while (word >= limit)
    word = gen();
  return word % bound;
}

} // namespace symsq
