#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symsq/bits.hpp"
#include "symsq/rng.hpp"
#include "symsq/symmetry.hpp"

namespace symsq {

/// A Boolean target over indices [0, domain_size), the shape every oracle
/// target takes. Concrete concept types convert themselves to this.
struct Concept {
  std::string id;
  std::size_t domain_size = 0;
  std::function<int(std::uint64_t)> eval;

  int operator()(std::uint64_t x) const {
    if (x >= domain_size)
      throw std::invalid_argument("Concept: point outside domain");
    return eval(x);
  }
};

inline Concept zero_concept(std::size_t domain_size) {
  return Concept{"zero", domain_size, [](std::uint64_t) { return 0; }};
}

/// A function constant on the orbits of a group action: one bit per block.
class SymmetricFunction {
public:
  SymmetricFunction(std::shared_ptr<const OrbitPartition> partition,
                    std::vector<std::uint8_t> orbit_bits)
      : partition_(std::move(partition)), orbit_bits_(std::move(orbit_bits)) {
    if (!partition_)
      throw std::invalid_argument("SymmetricFunction: null partition");
    if (orbit_bits_.size() != partition_->orbit_count())
      throw std::invalid_argument("SymmetricFunction: one bit per orbit required");
  }

  int evaluate(std::uint64_t x) const {
    if (x >= partition_->domain_size)
      throw std::invalid_argument("SymmetricFunction: point outside domain");
    return orbit_bits_[partition_->orbit_of[x]];
  }

  std::size_t domain_size() const { return partition_->domain_size; }
  const OrbitPartition &partition() const { return *partition_; }
  const std::vector<std::uint8_t> &orbit_bits() const { return orbit_bits_; }

  Concept as_concept(const std::string &id = "symmetric") const {
    auto self = *this;
    return Concept{id, domain_size(),
                   [self](std::uint64_t x) { return self.evaluate(x); }};
  }

private:
  std::shared_ptr<const OrbitPartition> partition_;
  std::vector<std::uint8_t> orbit_bits_;
};

/// Independent fair bit on every orbit.
inline SymmetricFunction sample_uniform_symmetric(std::shared_ptr<const OrbitPartition> partition,
                                                  std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> bits(partition->orbit_count());
  for (auto &b : bits)
    b = static_cast<std::uint8_t>(fair_bit(gen));
  return SymmetricFunction(std::move(partition), std::move(bits));
}

/// All 2^orbit_count members, ordered by the bit pattern read as an integer
/// (orbit 0 is the least significant bit).
inline std::vector<SymmetricFunction> enumerate_class(std::shared_ptr<const OrbitPartition> partition) {
  const std::size_t k = partition->orbit_count();
  if (k > 20)
    throw std::invalid_argument("enumerate_class: more than 2^20 members");
  std::vector<SymmetricFunction> out;
  out.reserve(std::size_t{1} << k);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << k); ++code) {
    std::vector<std::uint8_t> bits(k);
    for (std::size_t i = 0; i < k; ++i)
      bits[i] = static_cast<std::uint8_t>((code >> i) & 1u);
    out.emplace_back(partition, std::move(bits));
  }
  return out;
}

/// Parity of selected degree-count entries: g(A) = s_hat . (c_A mod 2) mod 2.
/// Inputs are column-major matrix bitstrings of width n^2.
class ParityConcept {
public:
  ParityConcept(int n, std::vector<std::uint8_t> s_hat)
      : n_(n), s_hat_(std::move(s_hat)) {
    if (n < 1 || n > 4)
      throw std::invalid_argument("ParityConcept: n out of range [1,4]");
    if (s_hat_.size() != static_cast<std::size_t>(n) + 1)
      throw std::invalid_argument("ParityConcept: s_hat must have length n+1");
    for (auto b : s_hat_)
      if (b > 1)
        throw std::invalid_argument("ParityConcept: s_hat entries must be 0/1");
  }

  static ParityConcept from_mask(int n, std::uint32_t mask) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
      bits[i] = static_cast<std::uint8_t>((mask >> i) & 1u);
    return ParityConcept(n, std::move(bits));
  }

  int n() const { return n_; }
  const std::vector<std::uint8_t> &s_hat() const { return s_hat_; }

  std::uint32_t mask() const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < s_hat_.size(); ++i)
      m |= static_cast<std::uint32_t>(s_hat_[i]) << i;
    return m;
  }

  std::size_t domain_size() const { return std::size_t{1} << (n_ * n_); }

  int evaluate(std::uint64_t x) const {
    if (x >= domain_size())
      throw std::invalid_argument("ParityConcept: point outside domain");
    const auto a = devectorize(BitString(n_ * n_, static_cast<std::uint32_t>(x)), n_);
    const auto parity = parity_reduce(degree_counts(a));
    int acc = 0;
    for (std::size_t i = 0; i < s_hat_.size(); ++i)
      acc ^= s_hat_[i] & parity.bits[i];
    return acc;
  }

  Concept as_concept() const {
    auto self = *this;
    return Concept{"parity[" + std::to_string(mask()) + "]", domain_size(),
                   [self](std::uint64_t x) { return self.evaluate(x); }};
  }

private:
  int n_;
  std::vector<std::uint8_t> s_hat_;
};

/// Parity s_hat . c over uniform {0,1}^m inputs. This is the idealized
/// domain where the degree-count register is replaced by a uniform one.
inline Concept uniform_parity_concept(int m, std::uint32_t s_hat_mask) {
  if (m < 1 || m > 16)
    throw std::invalid_argument("uniform_parity_concept: m out of range [1,16]");
  if (m < 32 && (s_hat_mask >> m))
    throw std::invalid_argument("uniform_parity_concept: mask exceeds 2^m");
  return Concept{"uparity[" + std::to_string(s_hat_mask) + "]", std::size_t{1} << m,
                 [s_hat_mask](std::uint64_t x) {
                   return dot_parity(static_cast<std::uint32_t>(x), s_hat_mask);
                 }};
}

/// Indicator concepts with pairwise-disjoint supports, each covering an
/// exact zeta fraction of the domain. Supports are consecutive index blocks.
class DisjointSupportClass {
public:
  DisjointSupportClass(std::size_t domain_size, std::size_t member_count, double zeta)
      : domain_size_(domain_size), zeta_(zeta) {
    if (domain_size == 0)
      throw std::invalid_argument("DisjointSupportClass: empty domain");
    if (member_count == 0)
      throw std::invalid_argument("DisjointSupportClass: need at least one member");
    if (zeta <= 0.0 || zeta >= 1.0)
      throw std::invalid_argument("DisjointSupportClass: zeta out of (0,1)");
    const double raw = zeta * static_cast<double>(domain_size);
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9 || rounded < 1.0)
      throw std::invalid_argument("DisjointSupportClass: zeta*|X| is not a positive integer");
    support_size_ = static_cast<std::size_t>(rounded);
    if (support_size_ * member_count > domain_size)
      throw std::invalid_argument("DisjointSupportClass: supports would overlap (m*zeta > 1)");
    for (std::size_t t = 0; t < member_count; ++t)
      supports_.emplace_back(t * support_size_, (t + 1) * support_size_);
  }

  std::size_t domain_size() const { return domain_size_; }
  std::size_t member_count() const { return supports_.size(); }
  std::size_t support_size() const { return support_size_; }
  double zeta() const { return zeta_; }

  /// Half-open index range [lo, hi) of member t's support.
  std::pair<std::size_t, std::size_t> support(std::size_t t) const {
    return supports_.at(t);
  }

  int evaluate(std::size_t t, std::uint64_t x) const {
    const auto [lo, hi] = supports_.at(t);
    return (x >= lo && x < hi) ? 1 : 0;
  }

  Concept member(std::size_t t) const {
    const auto [lo, hi] = supports_.at(t);
    return Concept{"disjoint[" + std::to_string(t) + "]", domain_size_,
                   [lo, hi](std::uint64_t x) { return (x >= lo && x < hi) ? 1 : 0; }};
  }

  Concept zero() const { return zero_concept(domain_size_); }

private:
  std::size_t domain_size_;
  double zeta_;
  std::size_t support_size_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> supports_;
};

inline DisjointSupportClass make_disjoint_class(std::size_t domain_size,
                                                std::size_t member_count, double zeta) {
  return DisjointSupportClass(domain_size, member_count, zeta);
}

} // namespace symsq
