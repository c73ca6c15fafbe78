#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "symsq/acceptance.hpp"
#include "symsq/analysis.hpp"
#include "symsq/analysis_window.hpp"
#include "symsq/learners.hpp"
#include "symsq/oracles.hpp"
#include "symsq/symmetry.hpp"
#include "symsq/version.hpp"

namespace symsq {

using json = nlohmann::json;

inline json to_json(const OrbitStats &s) {
  return json{{"domain_size", s.domain_size},   {"orbit_count", s.orbit_count},
              {"max_orbit", s.max_orbit},       {"sum_sq_sizes", s.sum_sq_sizes},
              {"p_norm_sq", s.p_norm_sq},       {"orbit_sizes", s.sizes}};
}

inline json to_json(const PairwiseReport &r) {
  return json{{"independent_pairs", r.independent_pairs},
              {"total_pairs", r.total_pairs},
              {"fraction", r.fraction},
              {"census_uniform", r.census_uniform},
              {"census_enumerated", r.census_enumerated}};
}

inline json to_json(const VarianceReport &r) {
  return json{{"mode", r.mode == VarianceReport::Mode::Exact ? "exact" : "montecarlo"},
              {"value", r.value},
              {"samples", r.samples},
              {"std_error", r.std_error}};
}

inline json to_json(const BoundReport &r) {
  return json{{"tau", r.tau},
              {"tau_warning", r.tau_warning},
              {"sq_bound", r.sq_bound},
              {"qsq_bound", r.qsq_bound},
              {"regularity_ratio", r.regularity_ratio},
              {"skewed", r.skewed},
              {"orbit_stats", to_json(r.stats)}};
}

inline json to_json(const ToleranceWindow &w) {
  return json{{"zeta", w.zeta}, {"low", w.low}, {"high", w.high}, {"valid", w.valid}};
}

inline json to_json(const QueryRecord &r) {
  return json{{"kind", r.kind},
              {"descriptor", r.descriptor},
              {"truth", r.truth},
              {"answer", r.answer},
              {"fallback", r.fallback}};
}

inline json to_json(const std::vector<QueryRecord> &log) {
  json out = json::array();
  for (const auto &r : log)
    out.push_back(to_json(r));
  return out;
}

inline json to_json(const LearnerReport &r) {
  return json{{"learner", r.learner},
              {"recovered_bits", r.recovered_bits},
              {"recovered_index", r.recovered_index},
              {"success", r.success},
              {"query_count", r.query_count},
              {"expectations", r.expectations},
              {"gap_trace", r.gap_trace},
              {"group_test_queries", r.group_test_queries},
              {"fallback_queries", r.fallback_queries},
              {"note", r.note}};
}

inline json to_json(const AuditReport &r) {
  return json{{"query_count", r.query_count},
              {"max_violation", r.max_violation},
              {"emitted_sound", r.emitted_sound},
              {"target_independent", r.target_independent},
              {"null_strategy_valid", r.null_strategy_valid},
              {"fallback_count", r.fallback_count}};
}

inline json to_json(const ComposedSweep &s) {
  return json{{"n", s.n},
              {"expectations", s.expectations},
              {"thresholds", s.thresholds},
              {"gaps", s.gaps},
              {"min_gap", s.min_gap}};
}

inline json to_json(const CriterionResult &r) {
  return json{{"index", r.index},
              {"name", r.name},
              {"pass", r.pass},
              {"detail", r.detail},
              {"seconds", r.seconds}};
}

/// Canonical report envelope: {config, seed, version, result}. Keys are
/// emitted in sorted order, so identical inputs serialize byte-identically.
inline json make_report(json config, std::uint64_t seed, json result) {
  return json{{"config", std::move(config)},
              {"seed", seed},
              {"version", kVersion},
              {"result", std::move(result)}};
}

} // namespace symsq
