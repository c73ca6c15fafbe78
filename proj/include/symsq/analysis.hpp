#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsq/analysis_window.hpp"
#include "symsq/concepts.hpp"
#include "symsq/quantum.hpp"
#include "symsq/rng.hpp"
#include "symsq/symmetry.hpp"

namespace symsq {

struct VarianceReport {
  enum class Mode { Exact, MonteCarlo };
  Mode mode = Mode::Exact;
  double value = 0.0;
  std::size_t samples = 0;   // class members visited
  double std_error = 0.0;    // zero in exact mode
};

namespace detail {

/// <psi_f| O |psi_f> evaluated from the index structure of the example
/// state: O(|X|) for diagonal observables, O(|X|^2) otherwise. `bit_of`
/// maps a domain point to f(x).
template <typename BitFn>
double expectation_on_bits(const Matrix &obs, bool diagonal, std::size_t domain,
                           BitFn &&bit_of) {
  if (diagonal) {
    double acc = 0.0;
    for (std::size_t x = 0; x < domain; ++x)
      acc += obs(static_cast<Eigen::Index>(2 * x + bit_of(x)),
                 static_cast<Eigen::Index>(2 * x + bit_of(x)))
                 .real();
    return acc / static_cast<double>(domain);
  }
  cplx acc = 0.0;
  std::vector<Eigen::Index> index(domain);
  for (std::size_t x = 0; x < domain; ++x)
    index[x] = static_cast<Eigen::Index>(2 * x + bit_of(x));
  for (std::size_t xp = 0; xp < domain; ++xp)
    for (std::size_t x = 0; x < domain; ++x)
      acc += obs(index[xp], index[x]);
  acc /= static_cast<double>(domain);
  if (std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error("variance: non-real expectation");
  return acc.real();
}

} // namespace detail

/// Variance of Tr[O |psi_f><psi_f|] over the symmetric class of the
/// partition. Exact mode enumerates all 2^orbit_count members; Monte Carlo
/// draws i.i.d. members and reports the sample variance with the standard
/// error of a variance estimate.
inline VarianceReport variance_of_observable(const OrbitPartition &part, const Observable &obs,
                                             VarianceReport::Mode mode,
                                             std::size_t samples = 0, std::uint64_t seed = 0) {
  if (static_cast<std::size_t>(obs.dim()) != 2 * part.domain_size)
    throw std::invalid_argument("variance_of_observable: dimension mismatch");
  const std::size_t k = part.orbit_count();
  const bool diagonal = obs.is_diagonal();
  const auto &m = obs.matrix();
  VarianceReport report;
  report.mode = mode;

  if (mode == VarianceReport::Mode::Exact) {
    if (k > 16)
      throw std::invalid_argument("variance_of_observable: orbit count above 16, exact mode infeasible");
    const std::uint64_t total = std::uint64_t{1} << k;
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t code = 0; code < total; ++code) {
      const double phi = detail::expectation_on_bits(
          m, diagonal, part.domain_size,
          [&](std::size_t x) { return (code >> part.orbit_of[x]) & 1u; });
      sum += phi;
      sum_sq += phi * phi;
    }
    const double mean = sum / static_cast<double>(total);
    report.value = sum_sq / static_cast<double>(total) - mean * mean;
    report.samples = total;
    return report;
  }

  if (samples < 2)
    throw std::invalid_argument("variance_of_observable: Monte Carlo needs at least 2 samples");
  std::mt19937_64 gen(seed);
  std::vector<double> values(samples);
  std::vector<std::uint8_t> bits(k);
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto &b : bits)
      b = static_cast<std::uint8_t>(fair_bit(gen));
    values[s] = detail::expectation_on_bits(
        m, diagonal, part.domain_size, [&](std::size_t x) { return bits[part.orbit_of[x]]; });
  }
  double mean = 0.0;
  for (double v : values)
    mean += v;
  mean /= static_cast<double>(samples);
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(samples);
  const double var_unbiased = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  report.value = var_unbiased;
  report.samples = samples;
  // Var(s^2) = (m4 - s^4 (n-3)/(n-1)) / n for i.i.d. samples.
  const double var_of_var = std::max(0.0, (m4 - var_unbiased * var_unbiased * (n - 3.0) / (n - 1.0)) / n);
  report.std_error = std::sqrt(var_of_var);
  return report;
}

struct PairwiseReport {
  std::uint64_t independent_pairs = 0; // ordered pairs from distinct orbits
  std::uint64_t total_pairs = 0;       // |X|^2
  double fraction = 0.0;               // equals 1 - ||p||_2^2 exactly
  bool census_uniform = false;         // label pairs uniform on qualifying pairs
  bool census_enumerated = false;      // census by class enumeration vs. factored count
};

/// Fraction of ordered input pairs whose labels are pairwise independent
/// under a uniform class member, with the label census verified either by
/// enumerating the class or, when 2^orbit_count is astronomically large, by
/// the exact per-orbit-bit count 2^(k-2) per label pair.
inline PairwiseReport pairwise_independence(const OrbitPartition &part) {
  if (part.domain_size > (std::size_t{1} << 12))
    throw std::invalid_argument("pairwise_independence: domain above 2^12");
  const std::size_t domain = part.domain_size;
  const std::size_t k = part.orbit_count();
  PairwiseReport report;
  report.total_pairs = static_cast<std::uint64_t>(domain) * domain;
  for (std::size_t x = 0; x < domain; ++x)
    for (std::size_t y = 0; y < domain; ++y)
      report.independent_pairs += part.orbit_of[x] != part.orbit_of[y] ? 1 : 0;
  report.fraction = static_cast<double>(report.independent_pairs) /
                    static_cast<double>(report.total_pairs);

  report.census_uniform = true;
  const double enumeration_cost =
      static_cast<double>(report.total_pairs) * std::pow(2.0, static_cast<double>(std::min<std::size_t>(k, 40)));
  if (k >= 2 && k <= 24 && enumeration_cost <= double(1u << 28)) {
    report.census_enumerated = true;
    const std::uint64_t members = std::uint64_t{1} << k;
    for (std::size_t x = 0; x < domain && report.census_uniform; ++x)
      for (std::size_t y = 0; y < domain && report.census_uniform; ++y) {
        if (part.orbit_of[x] == part.orbit_of[y])
          continue;
        std::uint64_t counts[4] = {0, 0, 0, 0};
        const auto ox = part.orbit_of[x], oy = part.orbit_of[y];
        for (std::uint64_t code = 0; code < members; ++code)
          counts[((code >> ox) & 1u) * 2 + ((code >> oy) & 1u)] += 1;
        for (int c = 0; c < 4; ++c)
          if (counts[c] != members / 4)
            report.census_uniform = false;
      }
  } else {
    // Distinct orbit bits are independent coordinates of the class index,
    // so each of the four label pairs is hit by exactly 2^(k-2) members.
    // With a single orbit there are no qualifying pairs at all.
    report.census_enumerated = false;
    report.census_uniform = true;
  }
  return report;
}

/// E_f[(-1)^(f(x)+f(x'))] over the whole class: 1 on a shared orbit, 0
/// otherwise. Enumerates class codes when feasible, otherwise sums the
/// exact marginal over the two relevant orbit bits.
inline double orbit_correlation(const OrbitPartition &part, std::uint64_t x, std::uint64_t xp) {
  if (x >= part.domain_size || xp >= part.domain_size)
    throw std::invalid_argument("orbit_correlation: point outside domain");
  const std::size_t k = part.orbit_count();
  const auto ox = part.orbit_of[x], oy = part.orbit_of[xp];
  if (k <= 20) {
    const std::uint64_t members = std::uint64_t{1} << k;
    std::int64_t acc = 0;
    for (std::uint64_t code = 0; code < members; ++code) {
      const int s = static_cast<int>(((code >> ox) ^ (code >> oy)) & 1u);
      acc += s ? -1 : 1;
    }
    return static_cast<double>(acc) / static_cast<double>(members);
  }
  if (ox == oy)
    return 1.0;
  double acc = 0.0;
  for (int bx = 0; bx < 2; ++bx)
    for (int by = 0; by < 2; ++by)
      acc += 0.25 * ((bx ^ by) ? -1.0 : 1.0);
  return acc;
}

struct BoundReport {
  double tau = 0.0;
  bool tau_warning = false;      // tau >= 0.096, outside the reduction regime
  double sq_bound = 0.0;         // tau^2 / ||p||_2^2
  double qsq_bound = 0.0;        // tau^2 |X| / max orbit
  double regularity_ratio = 0.0; // ||p||_2^2 |X| / max orbit, in (0,1]
  bool skewed = false;           // ratio under 1/2: general observables can gain
  OrbitStats stats;
};

/// Raw scaling expressions of the two query lower bounds; the undetermined
/// asymptotic constants are deliberately dropped.
inline BoundReport lower_bounds(double tau, const OrbitStats &stats) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw std::invalid_argument("lower_bounds: tau outside (0,1]");
  BoundReport report;
  report.tau = tau;
  report.tau_warning = tau >= 0.096;
  report.stats = stats;
  const double domain = static_cast<double>(stats.domain_size);
  report.sq_bound = tau * tau / stats.p_norm_sq;
  report.qsq_bound = tau * tau * domain / static_cast<double>(stats.max_orbit);
  report.regularity_ratio = stats.p_norm_sq * domain / static_cast<double>(stats.max_orbit);
  report.skewed = report.regularity_ratio < 0.5;
  return report;
}

/// sum |O_k|^2 <= max|O_k| * |X| in integer arithmetic.
inline bool discussion_inequality_exact(const OrbitStats &stats) {
  return stats.sum_sq_sizes <=
         static_cast<std::uint64_t>(stats.max_orbit) * static_cast<std::uint64_t>(stats.domain_size);
}

/// gamma(C', sigma) = mean |Tr[rho_hat_i rho_hat_j sigma]| with
/// rho_hat = rho sigma^+ - Pi on the support of sigma. Any family member
/// leaking more than 1e-9 of its mass off the support is an error.
inline double average_correlation(const std::vector<DensityOperator> &family,
                                  const DensityOperator &sigma) {
  if (family.empty())
    throw std::invalid_argument("average_correlation: empty family");
  const Eigen::Index dim = sigma.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma.matrix());
  Matrix support = Matrix::Zero(dim, dim);
  Matrix pseudo_inverse = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda > 1e-9) {
      const Matrix proj = solver.eigenvectors().col(k) * solver.eigenvectors().col(k).adjoint();
      support += proj;
      pseudo_inverse += proj / lambda;
    }
  }
  std::vector<Matrix> deviations;
  for (const auto &rho : family) {
    if (rho.dim() != dim)
      throw std::invalid_argument("average_correlation: dimension mismatch");
    const double leak = ((Matrix::Identity(dim, dim) - support) * rho.matrix()).trace().real();
    if (leak > 1e-9)
      throw std::invalid_argument("average_correlation: state leaks outside the support of sigma");
    deviations.push_back(rho.matrix() * pseudo_inverse - support);
  }
  double acc = 0.0;
  for (const auto &a : deviations)
    for (const auto &b : deviations)
      acc += std::abs((a * b * sigma.matrix()).trace());
  const double count = static_cast<double>(family.size());
  return acc / (count * count);
}

/// Minimum trace distance from a class member to the class mixture, by
/// enumeration or by sampling members. Guards the decision-problem
/// reduction: the minimum must clear 1 - sqrt(1/2).
inline double min_trace_distance_check(const OrbitPartition &part,
                                       std::size_t sample_count = 0, std::uint64_t seed = 0) {
  const std::size_t k = part.orbit_count();
  if (k < 2)
    throw std::invalid_argument("min_trace_distance_check: degenerate class, orbit count below 2");
  if (k > 16)
    throw std::invalid_argument("min_trace_distance_check: orbit count above 16");
  if ((std::uint64_t{1} << k) * part.domain_size > (std::uint64_t{1} << 22))
    throw std::invalid_argument("min_trace_distance_check: ensemble too large to materialize");
  auto shared = std::make_shared<OrbitPartition>(part);
  const auto members = enumerate_class(shared);
  std::vector<StateVector> states;
  states.reserve(members.size());
  for (const auto &f : members)
    states.push_back(example_state(f.as_concept()));
  const DensityOperator sigma = mixture_density(states);

  double min_dist = std::numeric_limits<double>::infinity();
  if (sample_count == 0) {
    for (const auto &s : states)
      min_dist = std::min(min_dist, trace_distance(pure_density(s), sigma));
  } else {
    std::mt19937_64 gen(seed);
    for (std::size_t s = 0; s < sample_count; ++s) {
      const std::size_t pick = static_cast<std::size_t>(below(gen, states.size()));
      min_dist = std::min(min_dist, trace_distance(pure_density(states[pick]), sigma));
    }
  }
  if (min_dist < 1.0 - std::sqrt(0.5) - 1e-9)
    throw std::runtime_error("min_trace_distance_check: reduction hypothesis violated");
  return min_dist;
}

} // namespace symsq
