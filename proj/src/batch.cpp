#include "mlc/batch.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mlc {

TimingSummary summarize_timing(std::span<const double> seconds) {
  TimingSummary s;
  s.count = static_cast<int>(seconds.size());
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : seconds) sum += v;
  s.mean_seconds = sum / s.count;
  std::vector<double> sorted(seconds.begin(), seconds.end());
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(sorted.size())));
  s.p95_seconds = sorted[std::max<std::size_t>(rank, 1) - 1];
  s.max_seconds = sorted.back();
  return s;
}

namespace {

BatchRow run_one(const Scenario& base, std::uint64_t seed, PlannerKind planner) {
  Scenario scenario = base;
  scenario.seed = seed;
  scenario.planner = planner;
  const RunResult result = run(scenario);
  return {seed, planner, result.metrics, summarize_timing(result.decision_seconds)};
}

}  // namespace

std::vector<BatchRow> run_batch(const Scenario& base,
                                std::span<const std::uint64_t> seeds,
                                std::span<const PlannerKind> planners,
                                int threads) {
  const std::size_t n = seeds.size() * planners.size();
  std::vector<BatchRow> rows(n);
  auto cell = [&](std::size_t flat) {
    const std::size_t i = flat / planners.size();
    const std::size_t j = flat % planners.size();
    rows[flat] = run_one(base, seeds[i], planners[j]);
  };
#ifdef _OPENMP
  if (threads != 1) {
    if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long long flat = 0; flat < static_cast<long long>(n); ++flat) {
      cell(static_cast<std::size_t>(flat));
    }
    return rows;
  }
#else
  (void)threads;
#endif
  for (std::size_t flat = 0; flat < n; ++flat) cell(flat);
  return rows;
}

}  // namespace mlc
