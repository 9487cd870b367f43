// Benchmark: serial batch runner vs the OpenMP-parallel one on the same
// seed set, verifying that both produce identical summaries.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mlc/batch.hpp"
#include "mlc/engine.hpp"
#include "mlc/io.hpp"

namespace {

mlc::Scenario reference_scenario() {
  mlc::Scenario s;
  s.generation = mlc::GenerationTemplate{};
  s.duration = 150.0;
  return s;
}

double time_batch(const mlc::Scenario& base, std::span<const std::uint64_t> seeds,
                  std::span<const mlc::PlannerKind> planners, int threads,
                  std::string& summary_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = mlc::run_batch(base, seeds, planners, threads);
  const auto t1 = std::chrono::steady_clock::now();
  summary_out = mlc::batch_summary_to_csv(rows);
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n_seeds = 24;
  if (argc > 1) n_seeds = std::stoi(argv[1]);

  const mlc::Scenario base = reference_scenario();
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < n_seeds; ++i) seeds.push_back(static_cast<std::uint64_t>(i + 1));
  const std::vector<mlc::PlannerKind> planners = {mlc::PlannerKind::Pso,
                                                  mlc::PlannerKind::Ga};

  std::cout << "batch benchmark: " << n_seeds << " seeds x 2 planners\n";

  std::string serial_summary;
  const double serial = time_batch(base, seeds, planners, 1, serial_summary);
  std::cout << "  serial          " << serial << " s\n";

#ifdef _OPENMP
  const int hw = omp_get_max_threads();
  for (int threads = 2; threads <= hw; ++threads) {
    std::string parallel_summary;
    const double parallel = time_batch(base, seeds, planners, threads, parallel_summary);
    const bool identical = parallel_summary == serial_summary;
    std::cout << "  openmp x" << threads << "       " << parallel << " s  (speedup "
              << serial / parallel << ", results "
              << (identical ? "identical" : "DIFFER") << ")\n";
    if (!identical) return 1;
  }
#else
  std::cout << "  (built without OpenMP; no parallel lane to compare)\n";
#endif
  return 0;
}
