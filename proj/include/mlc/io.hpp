#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "mlc/batch.hpp"
#include "mlc/engine.hpp"

namespace mlc {

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double v);

// Scenario files: INI-style sections [dz], [cost], [ga], [newell] and one of
// [generation] / [vehicles]; `planner`, `duration_s`, `seed` at top level.
// Speeds are km/h in files and converted here. Throws std::invalid_argument
// naming the offending field.
Scenario parse_scenario_text(std::string_view text, std::string_view origin);
Scenario parse_scenario(const std::filesystem::path& path);

// Trajectory table: t_s,vehicle_id,lane,x_m,v_kmh,event — one row per
// vehicle per frame, events inlined on their frame row.
std::string trajectories_to_csv(const SimulationLog& log);
SimulationLog trajectories_from_csv(std::string_view csv);

// Pre-merge speed profiles of dedicated-lane vehicles: t_s,vehicle_id,v_kmh.
std::string speeds_to_csv(const SimulationLog& log);

std::string metrics_to_json(const Metrics& metrics, const TimingSummary& timing,
                            PlannerKind planner, std::uint64_t seed);

std::string batch_summary_to_csv(std::span<const BatchRow> rows);

std::string comparison_to_json(const BatchRow& pso, const BatchRow& ga);

// Write-then-rename; removes the partial temporary on failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

SimulationLog load_trajectories(const std::filesystem::path& path);

}  // namespace mlc
