#pragma once

#include <cstdint>
#include <string>

#include "forge.hpp"
#include "schedule.hpp"

namespace topoforge {

// Everything that determines a run.  Serialized alongside every artifact;
// identical config + seed must reproduce identical artifacts.
struct RunConfig {
  uint32_t p = 2;          // characteristic; 0 selects the rational control field
  uint32_t rows = 1;       // J
  uint32_t precision = 16; // N; raised automatically with the target depth
  uint64_t tau_budget = 64;
  uint64_t branch_budget = 8;
  uint64_t direct_attempts = 8;
  uint64_t max_stage_series = 100000;
  uint64_t max_stage_field = 2000000;
  uint64_t seed = 0;
  uint32_t jobs = 1;
  std::string strategy = "series-guided";  // or "direct-greedy"
  std::string schedule = kScheduleId;
  uint32_t sample_dim = 1;  // frontier builds

  bool rational_control() const { return p == 0; }

  ForgeBudget budget() const {
    ForgeBudget b;
    b.tau_candidates = tau_budget;
    b.branch_per_node = branch_budget;
    b.max_stage_series = max_stage_series;
    b.max_stage_field = max_stage_field;
    b.direct_attempts = direct_attempts;
    return b;
  }

  // Effective series precision for a given extension target.  Iterated
  // products double valuations once per descent step, so the working
  // precision scales like 2^target (with margin, capped).
  uint32_t precision_for_target(size_t target) const {
    uint32_t auto_n = 4;
    for (size_t k = 0; k < target && auto_n < 128; ++k) auto_n *= 2;
    return precision > auto_n ? precision : auto_n;
  }

  std::string to_json() const;
  static RunConfig from_json(const std::string& json);
};

}  // namespace topoforge
