#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mlc/engine.hpp"

namespace mlc {

struct TimingSummary {
  int count = 0;
  double mean_seconds = 0.0;
  double p95_seconds = 0.0;
  double max_seconds = 0.0;
};

TimingSummary summarize_timing(std::span<const double> seconds);

struct BatchRow {
  std::uint64_t seed = 0;
  PlannerKind planner = PlannerKind::Pso;
  Metrics metrics;
  TimingSummary timing;
};

// Runs every (seed, planner) pair of the base scenario. Rows come back in
// seed-major, planner-minor order regardless of thread count; simulations
// share no mutable state, so the parallel path is bit-identical to the
// serial one.
//
// threads == 1 runs the plain serial loop (the reference path); threads <= 0
// uses all hardware threads. Without OpenMP the loop is always serial.
std::vector<BatchRow> run_batch(const Scenario& base,
                                std::span<const std::uint64_t> seeds,
                                std::span<const PlannerKind> planners,
                                int threads = 0);

}  // namespace mlc
