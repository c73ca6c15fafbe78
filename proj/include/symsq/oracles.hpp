#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symsq/concepts.hpp"
#include "symsq/quantum.hpp"

namespace symsq {

/// phi : X x {0,1} -> [-1,1]
using StatQueryFn = std::function<double(std::uint64_t, int)>;

enum class AdversaryKind { Exact, GridRound, NullConsistent, WorstCaseShift };

inline const char *to_string(AdversaryKind k) {
  switch (k) {
  case AdversaryKind::Exact: return "exact";
  case AdversaryKind::GridRound: return "grid";
  case AdversaryKind::NullConsistent: return "null";
  case AdversaryKind::WorstCaseShift: return "worst";
  }
  return "?";
}

/// Per-query answering strategy. Every emitted answer stays within tau of
/// the truth:
///   Exact          returns the truth.
///   GridRound      rounds to the nearest multiple of tau.
///   NullConsistent answers as if the target were the reference concept,
///                  falling back to the truth (flagged) when that would
///                  leave the tolerance band.
///   WorstCaseShift moves the truth toward the reference value, clipped to
///                  the band.
struct ToleranceAdversary {
  AdversaryKind kind = AdversaryKind::Exact;
  std::optional<Concept> reference;

  bool needs_reference() const {
    return kind == AdversaryKind::NullConsistent || kind == AdversaryKind::WorstCaseShift;
  }

  struct Response {
    double answer = 0.0;
    bool fallback = false;
  };

  Response respond(double truth, std::optional<double> reference_value, double tau) const {
    switch (kind) {
    case AdversaryKind::Exact:
      return {truth, false};
    case AdversaryKind::GridRound:
      return {tau * std::round(truth / tau), false};
    case AdversaryKind::NullConsistent: {
      const double ref = reference_value.value();
      if (std::abs(ref - truth) <= tau)
        return {ref, false};
      return {truth, true};
    }
    case AdversaryKind::WorstCaseShift: {
      const double ref = reference_value.value();
      return {std::clamp(ref, truth - tau, truth + tau), false};
    }
    }
    throw std::logic_error("ToleranceAdversary: unknown kind");
  }
};

inline ToleranceAdversary exact_adversary() { return {AdversaryKind::Exact, std::nullopt}; }
inline ToleranceAdversary grid_adversary() { return {AdversaryKind::GridRound, std::nullopt}; }
inline ToleranceAdversary null_adversary(Concept reference) {
  return {AdversaryKind::NullConsistent, std::move(reference)};
}
inline ToleranceAdversary worst_adversary(Concept reference) {
  return {AdversaryKind::WorstCaseShift, std::move(reference)};
}

struct QueryRecord {
  std::string kind; // "stat" or "qstat"
  std::string descriptor;
  double truth = 0.0;
  double answer = 0.0;
  bool fallback = false;
};

/// The single point of oracle access: a target concept, a tolerance, an
/// adversary, and the log of every query issued.
class OracleSession {
public:
  OracleSession(Concept target, double tau, ToleranceAdversary adversary)
      : target_(std::move(target)), tau_(tau), adversary_(std::move(adversary)) {
    if (!(tau_ > 0.0 && tau_ <= 1.0))
      throw std::invalid_argument("OracleSession: tau outside (0,1]");
    if (adversary_.needs_reference()) {
      if (!adversary_.reference)
        throw std::invalid_argument("OracleSession: adversary requires a reference concept");
      if (adversary_.reference->domain_size != target_.domain_size)
        throw std::invalid_argument("OracleSession: reference domain mismatch");
    }
  }

  /// Density-operator target: only quantum queries are meaningful.
  OracleSession(DensityOperator target, double tau, ToleranceAdversary adversary)
      : target_(zero_concept(1)), tau_(tau), adversary_(std::move(adversary)),
        density_target_(std::move(target)) {
    if (!(tau_ > 0.0 && tau_ <= 1.0))
      throw std::invalid_argument("OracleSession: tau outside (0,1]");
    if (adversary_.needs_reference())
      throw std::invalid_argument("OracleSession: reference adversaries need a concept target");
  }

  double tau() const { return tau_; }
  const Concept &target() const { return target_; }
  const std::vector<QueryRecord> &log() const { return log_; }
  std::size_t query_count() const { return log_.size(); }

  /// Classical statistical query. The truth is E_x[phi(x, f(x))] under the
  /// uniform distribution; phi is range-checked over the whole domain first.
  double stat_query(const StatQueryFn &phi, const std::string &descriptor = "stat") {
    if (density_target_)
      throw std::invalid_argument("stat_query: density targets admit only quantum queries");
    validate_range(phi);
    const double truth = stat_truth(target_, phi);
    std::optional<double> ref;
    if (adversary_.needs_reference())
      ref = stat_truth(*adversary_.reference, phi);
    return record("stat", descriptor, truth, ref);
  }

  /// Quantum statistical query <psi_f| O |psi_f>. Exactly diagonal
  /// observables are routed through the classical kernel, so such queries
  /// reproduce stat_query answers bit for bit.
  double qstat_query(const Observable &obs, const std::string &descriptor = "qstat") {
    if (density_target_) {
      if (obs.dim() != density_target_->dim())
        throw std::invalid_argument("qstat_query: dimension mismatch");
      const double truth = expectation(obs, *density_target_);
      return record("qstat", descriptor, truth, std::nullopt);
    }
    if (static_cast<std::size_t>(obs.dim()) != 2 * target_.domain_size)
      throw std::invalid_argument("qstat_query: dimension mismatch");
    if (obs.is_diagonal()) {
      const auto &m = obs.matrix();
      const auto phi = [&m](std::uint64_t x, int label) {
        return m(static_cast<Eigen::Index>(2 * x + static_cast<std::uint64_t>(label)),
                 static_cast<Eigen::Index>(2 * x + static_cast<std::uint64_t>(label)))
            .real();
      };
      const double truth = stat_truth(target_, phi);
      std::optional<double> ref;
      if (adversary_.needs_reference())
        ref = stat_truth(*adversary_.reference, phi);
      return record("qstat", descriptor, truth, ref);
    }
    const double truth = expectation(obs, target_state());
    std::optional<double> ref;
    if (adversary_.needs_reference())
      ref = expectation(obs, reference_state());
    return record("qstat", descriptor, truth, ref);
  }

  std::size_t fallback_count() const {
    std::size_t n = 0;
    for (const auto &r : log_)
      n += r.fallback ? 1 : 0;
    return n;
  }

private:
  static double stat_truth(const Concept &f, const StatQueryFn &phi) {
    double acc = 0.0;
    for (std::uint64_t x = 0; x < f.domain_size; ++x)
      acc += phi(x, f.eval(x));
    return acc / static_cast<double>(f.domain_size);
  }

  void validate_range(const StatQueryFn &phi) const {
    for (std::uint64_t x = 0; x < target_.domain_size; ++x)
      for (int label = 0; label < 2; ++label) {
        const double v = phi(x, label);
        if (!(v >= -1.0 && v <= 1.0))
          throw std::invalid_argument("stat_query: phi leaves [-1,1]");
      }
  }

  double record(const char *kind, const std::string &descriptor, double truth,
                std::optional<double> ref) {
    const auto resp = adversary_.respond(truth, ref, tau_);
    log_.push_back({kind, descriptor, truth, resp.answer, resp.fallback});
    return resp.answer;
  }

  const StateVector &target_state() {
    if (!target_state_)
      target_state_.emplace(example_state(target_));
    return *target_state_;
  }

  const StateVector &reference_state() {
    if (!reference_state_)
      reference_state_.emplace(example_state(*adversary_.reference));
    return *reference_state_;
  }

  Concept target_;
  double tau_;
  ToleranceAdversary adversary_;
  std::vector<QueryRecord> log_;
  std::optional<StateVector> target_state_;
  std::optional<StateVector> reference_state_;
  std::optional<DensityOperator> density_target_;
};

/// One audit query: either a classical phi or an observable.
struct BatteryQuery {
  std::string descriptor;
  StatQueryFn phi;          // set iff classical
  std::optional<Observable> observable;
};

inline BatteryQuery stat_battery_query(std::string descriptor, StatQueryFn phi) {
  return BatteryQuery{std::move(descriptor), std::move(phi), std::nullopt};
}

inline BatteryQuery qstat_battery_query(std::string descriptor, Observable obs) {
  return BatteryQuery{std::move(descriptor), nullptr, std::move(obs)};
}

/// Tabled random diagonal queries, reproducible from the seed.
inline std::vector<BatteryQuery> random_diagonal_battery(std::size_t domain_size,
                                                         std::size_t count,
                                                         std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<BatteryQuery> out;
  out.reserve(count);
  for (std::size_t q = 0; q < count; ++q) {
    auto table = std::make_shared<std::vector<double>>(2 * domain_size);
    for (auto &v : *table)
      v = symmetric_double(gen);
    out.push_back(stat_battery_query(
        "rand-phi#" + std::to_string(q),
        [table](std::uint64_t x, int label) {
          return (*table)[2 * x + static_cast<std::uint64_t>(label)];
        }));
  }
  return out;
}

struct AuditReport {
  std::size_t query_count = 0;     // (concept, query) pairs audited
  double max_violation = 0.0;      // max |answer - truth| - tau over the run, clipped at 0
  bool emitted_sound = true;       // every logged answer within tau + 1e-12
  bool target_independent = true;  // per query, one answer across all targets
  bool null_strategy_valid = true; // no fallback was ever needed
  std::size_t fallback_count = 0;
};

/// Replays the battery against every concept in the class under the given
/// adversary and checks the tolerance contract query by query.
inline AuditReport validity_audit(const ToleranceAdversary &adversary, double tau,
                                  const std::vector<Concept> &members,
                                  const std::vector<BatteryQuery> &battery) {
  AuditReport report;
  for (const auto &query : battery) {
    std::optional<double> common_answer;
    bool first = true;
    for (const auto &f : members) {
      OracleSession session(f, tau, adversary);
      const double answer = query.observable
                                ? session.qstat_query(*query.observable, query.descriptor)
                                : session.stat_query(query.phi, query.descriptor);
      const auto &rec = session.log().back();
      report.query_count += 1;
      report.fallback_count += rec.fallback ? 1 : 0;
      if (rec.fallback)
        report.null_strategy_valid = false;
      const double excess = std::abs(rec.answer - rec.truth) - tau;
      report.max_violation = std::max(report.max_violation, std::max(0.0, excess));
      if (excess > 1e-12)
        report.emitted_sound = false;
      if (first) {
        common_answer = answer;
        first = false;
      } else if (std::abs(answer - *common_answer) > 1e-12) {
        report.target_independent = false;
      }
    }
  }
  return report;
}

} // namespace symsq
