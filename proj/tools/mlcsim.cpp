// Command-line front end: single runs, PSO-vs-GA comparisons, and
// multi-seed batches over a scenario file.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlc/batch.hpp"
#include "mlc/engine.hpp"
#include "mlc/io.hpp"

namespace fs = std::filesystem;

namespace {

struct EmitChoice {
  bool trajectories = true;
  bool metrics = true;
  bool speeds = true;
};

std::string opt_str(const std::optional<double>& v, const char* unit) {
  if (!v) return "n/a";
  return mlc::format_double(*v) + unit;
}

void print_row(const mlc::BatchRow& row) {
  const mlc::Metrics& m = row.metrics;
  std::cout << "  " << mlc::planner_name(row.planner) << ": merged " << m.merged_count
            << ", detours " << m.detour_count << ", mean merge pos "
            << opt_str(m.mean_merge_position, " m") << ", mean merge time "
            << opt_str(m.mean_merge_time, " s") << ", dz speed "
            << opt_str(m.avg_dz_speed_kmh, " km/h") << ", decision mean "
            << mlc::format_double(row.timing.mean_seconds) << " s (p95 "
            << mlc::format_double(row.timing.p95_seconds) << " s)\n";
}

void emit_run(const fs::path& out_dir, const mlc::BatchRow& row,
              const mlc::SimulationLog& log, const EmitChoice& emit) {
  const std::string suffix = std::string("_") + mlc::planner_name(row.planner);
  if (emit.trajectories) {
    mlc::write_atomic(out_dir / ("trajectories" + suffix + ".csv"),
                      mlc::trajectories_to_csv(log));
  }
  if (emit.metrics) {
    mlc::write_atomic(out_dir / ("metrics" + suffix + ".json"),
                      mlc::metrics_to_json(row.metrics, row.timing, row.planner,
                                           row.seed));
  }
  if (emit.speeds) {
    mlc::write_atomic(out_dir / ("speeds" + suffix + ".csv"), mlc::speeds_to_csv(log));
  }
}

mlc::BatchRow run_single(const mlc::Scenario& base, std::uint64_t seed,
                         mlc::PlannerKind planner, mlc::SimulationLog& log_out) {
  mlc::Scenario scenario = base;
  scenario.seed = seed;
  scenario.planner = planner;
  mlc::RunResult result = mlc::run(scenario);
  log_out = std::move(result.log);
  return {seed, planner, result.metrics,
          mlc::summarize_timing(result.decision_seconds)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mandatory-lane-change trajectory planning simulator"};

  std::string scenario_path;
  std::string planner_flag;
  std::string emit_flag = "all";
  std::string out_dir = "out";
  bool compare = false;
  int batch = 0;
  std::int64_t seed_flag = -1;
  int threads = 0;

  app.add_option("--scenario", scenario_path, "scenario file")->required();
  app.add_option("--planner", planner_flag, "planner override: pso or ga")
      ->check(CLI::IsMember({"pso", "ga"}));
  app.add_flag("--compare", compare, "run both planners on the same scenario");
  app.add_option("--batch", batch, "run N consecutive seeds starting at the base seed")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed_flag, "base seed override")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--emit", emit_flag, "outputs to write")
      ->check(CLI::IsMember({"trajectories", "metrics", "speeds", "all"}));
  app.add_option("--threads", threads, "batch worker count (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    mlc::Scenario base = mlc::parse_scenario(scenario_path);
    if (seed_flag >= 0) base.seed = static_cast<std::uint64_t>(seed_flag);
    if (planner_flag == "pso") base.planner = mlc::PlannerKind::Pso;
    if (planner_flag == "ga") base.planner = mlc::PlannerKind::Ga;

    EmitChoice emit;
    emit.trajectories = emit_flag == "all" || emit_flag == "trajectories";
    emit.metrics = emit_flag == "all" || emit_flag == "metrics";
    emit.speeds = emit_flag == "all" || emit_flag == "speeds";

    fs::create_directories(out_dir);
    const fs::path out{out_dir};

    if (batch > 0) {
      std::vector<std::uint64_t> seeds;
      for (int i = 0; i < batch; ++i) seeds.push_back(base.seed + static_cast<std::uint64_t>(i));
      std::vector<mlc::PlannerKind> planners;
      if (compare) {
        planners = {mlc::PlannerKind::Pso, mlc::PlannerKind::Ga};
      } else {
        planners = {base.planner};
      }
      const auto rows = mlc::run_batch(base, seeds, planners, threads);
      mlc::write_atomic(out / "batch_summary.csv", mlc::batch_summary_to_csv(rows));
      std::cout << "batch of " << batch << " seed(s) -> "
                << (out / "batch_summary.csv").string() << "\n";
      return 0;
    }

    if (compare) {
      mlc::SimulationLog pso_log, ga_log;
      const auto pso = run_single(base, base.seed, mlc::PlannerKind::Pso, pso_log);
      const auto ga = run_single(base, base.seed, mlc::PlannerKind::Ga, ga_log);
      emit_run(out, pso, pso_log, emit);
      emit_run(out, ga, ga_log, emit);
      mlc::write_atomic(out / "comparison.json", mlc::comparison_to_json(pso, ga));
      std::cout << "seed " << base.seed << ":\n";
      print_row(pso);
      print_row(ga);
      return 0;
    }

    mlc::SimulationLog log;
    const auto row = run_single(base, base.seed, base.planner, log);
    emit_run(out, row, log, emit);
    std::cout << "seed " << base.seed << ":\n";
    print_row(row);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
