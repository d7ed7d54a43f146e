#pragma once

#include <cstdint>

#include "prefixopt/objective.hpp"

namespace prefixopt {

struct SolveStats {
  std::uint64_t recursive_calls = 0;
  std::uint64_t candidates_examined = 0;
  std::uint64_t max_depth = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  std::uint64_t phc_score = 0;  // always equals phc() recomputed on `schedule`
  RequestSchedule schedule;
  SolveStats stats;
  bool optimal = true;  // cleared when a time budget cut the search short
};

}  // namespace prefixopt
