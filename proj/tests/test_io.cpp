#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mlc/engine.hpp"
#include "mlc/io.hpp"

using namespace mlc;

namespace {

const char* kMinimalScenario = R"(
# library defaults everywhere else
planner = pso
duration_s = 120
seed = 42

[cost]
detour_distance_m = 3000
detour_speed_kmh = 60

[generation]
)";

std::string with_line(const std::string& base, const std::string& extra) {
  return base + "\n" + extra + "\n";
}

}  // namespace

TEST_CASE("minimal scenario parses to the documented defaults") {
  const Scenario s = parse_scenario_text(kMinimalScenario, "test");
  CHECK(s.planner == PlannerKind::Pso);
  CHECK(s.duration == 120.0);
  CHECK(s.seed == 42);
  CHECK(s.dz.x_start == 0.0);
  CHECK(s.dz.x_end == 1500.0);
  CHECK(s.dz.dt == 0.2);
  CHECK(s.dz.cav_v_min == doctest::Approx(kmh_to_ms(60.0)).epsilon(1e-15));
  CHECK(s.dz.cav_v_max == doctest::Approx(kmh_to_ms(100.0)).epsilon(1e-15));
  CHECK(s.dz.cav_headway_min == 0.5);
  CHECK(s.dz.hdv_headway_min == 1.5);
  CHECK(s.cost.detour_distance == 3000.0);
  CHECK(s.cost.detour_speed == doctest::Approx(kmh_to_ms(60.0)).epsilon(1e-15));
  CHECK(s.cost.failure_rate_coeff == 0.046);
  CHECK(s.newell.wave_speed == 3.7);
  CHECK(s.newell.jam_spacing == 3.7);
  REQUIRE(s.generation.has_value());
  CHECK(s.generation->cav_count == 5);
  CHECK(s.generation->hdv_count == 8);
  CHECK(s.generation->cav_speed == doctest::Approx(kmh_to_ms(100.0)).epsilon(1e-15));
}

TEST_CASE("diagnostics name the offending field") {
  SUBCASE("inverted dz") {
    const std::string text = std::string(kMinimalScenario) + "[dz]\nx_end_m = -5\n";
    CHECK_THROWS_WITH_AS(parse_scenario_text(text, "test"),
                         doctest::Contains("x_start must be < x_end"),
                         std::invalid_argument);
  }
  SUBCASE("missing mandatory cost field") {
    const char* text = "planner = pso\nduration_s = 10\n[cost]\ndetour_distance_m = 100\n[generation]\n";
    CHECK_THROWS_WITH_AS(parse_scenario_text(text, "test"),
                         doctest::Contains("detour_speed_kmh"), std::invalid_argument);
  }
  SUBCASE("vehicles and generation together") {
    const std::string text =
        with_line(kMinimalScenario, "[vehicles]\nvehicle = 1 cav mlc 100 100");
    CHECK_THROWS_WITH_AS(parse_scenario_text(text, "test"),
                         doctest::Contains("mutually exclusive"), std::invalid_argument);
  }
  SUBCASE("unknown key") {
    const std::string text = with_line(kMinimalScenario, "[newell]\nwave_sped_ms = 3");
    CHECK_THROWS_WITH_AS(parse_scenario_text(text, "test"),
                         doctest::Contains("wave_sped_ms"), std::invalid_argument);
  }
  SUBCASE("unknown section") {
    const std::string text = with_line(kMinimalScenario, "[typo]\nx = 1");
    CHECK_THROWS_AS(parse_scenario_text(text, "test"), std::invalid_argument);
  }
  SUBCASE("bad number") {
    const std::string text = with_line(kMinimalScenario, "[dz]\ndt_s = fast");
    CHECK_THROWS_WITH_AS(parse_scenario_text(text, "test"),
                         doctest::Contains("dt_s"), std::invalid_argument);
  }
}

TEST_CASE("explicit vehicle list") {
  const char* text = R"(
planner = ga
duration_s = 30
[cost]
detour_distance_m = 3000
detour_speed_kmh = 60
[vehicles]
vehicle = 1 cav mlc 120 100
vehicle = 2 cav through 90 100
vehicle = 101 hdv hdv 300 72 90
)";
  const Scenario s = parse_scenario_text(text, "test");
  CHECK(s.planner == PlannerKind::Ga);
  REQUIRE(s.vehicles.size() == 3);
  CHECK(s.vehicles[0].role == Role::MlcCav);
  CHECK(s.vehicles[1].role == Role::ThroughCav);
  CHECK(s.vehicles[2].lane == Lane::Hdv);
  CHECK(s.vehicles[2].v == doctest::Approx(kmh_to_ms(72.0)).epsilon(1e-15));
  CHECK(s.vehicles[2].v_desired == doctest::Approx(kmh_to_ms(90.0)).epsilon(1e-15));
  // Desired speed defaults to the current speed when omitted.
  CHECK(s.vehicles[0].v_desired == s.vehicles[0].v);
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.2, 1.0 / 3.0, 277.80000000000001, 1e-300, -42.5, 0.0}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.2) == "0.2");  // shortest form, not 0.200000...
}

TEST_CASE("trajectory csv round trip preserves frames, events and metrics") {
  Scenario s;
  s.generation = GenerationTemplate{};
  s.duration = 150.0;
  s.seed = 3;
  const RunResult result = run(s);
  REQUIRE_FALSE(result.log.frames.empty());

  const std::string csv = trajectories_to_csv(result.log);
  const SimulationLog loaded = trajectories_from_csv(csv);

  REQUIRE(loaded.frames.size() == result.log.frames.size());
  for (std::size_t i = 0; i < loaded.frames.size(); ++i) {
    CHECK(loaded.frames[i].t == result.log.frames[i].t);
    CHECK(loaded.frames[i].vehicle_id == result.log.frames[i].vehicle_id);
    CHECK(loaded.frames[i].lane == result.log.frames[i].lane);
    CHECK(loaded.frames[i].x == result.log.frames[i].x);
    CHECK(loaded.frames[i].v_kmh == result.log.frames[i].v_kmh);
  }
  REQUIRE(loaded.events.size() == result.log.events.size());

  // Metrics recomputed from the emitted table equal the originals exactly.
  const Metrics from_file = compute_metrics(loaded, s.dz);
  CHECK(from_file.merged_count == result.metrics.merged_count);
  CHECK(from_file.mean_merge_position == result.metrics.mean_merge_position);
  CHECK(from_file.mean_merge_time == result.metrics.mean_merge_time);
  CHECK(from_file.avg_dz_speed_kmh == result.metrics.avg_dz_speed_kmh);
  CHECK(from_file.avg_dz_speed_all_lanes_kmh == result.metrics.avg_dz_speed_all_lanes_kmh);
  CHECK(from_file.avg_hdv_speed_kmh == result.metrics.avg_hdv_speed_kmh);
  REQUIRE(from_file.per_vehicle.size() == result.metrics.per_vehicle.size());
  for (std::size_t i = 0; i < from_file.per_vehicle.size(); ++i) {
    CHECK(from_file.per_vehicle[i].merged == result.metrics.per_vehicle[i].merged);
    CHECK(from_file.per_vehicle[i].merge_position ==
          result.metrics.per_vehicle[i].merge_position);
    CHECK(from_file.per_vehicle[i].dz_speed_dedicated_kmh ==
          result.metrics.per_vehicle[i].dz_speed_dedicated_kmh);
  }
}

TEST_CASE("trajectory rows and the merge-frame lane flip") {
  SimulationLog log;
  log.frames.push_back({0.0, 1, Lane::DedicatedCav, 100.0, 100.0});
  log.frames.push_back({0.0, 2, Lane::Hdv, 50.0, 80.0});
  log.frames.push_back({0.2, 1, Lane::Hdv, 105.0, 100.0});
  log.frames.push_back({0.2, 2, Lane::Hdv, 54.0, 80.0});
  log.frames.push_back({0.4, 1, Lane::Hdv, 110.0, 100.0});
  log.frames.push_back({0.4, 2, Lane::Hdv, 58.0, 80.0});
  log.events.push_back({0.2, 1, EventKind::MergeExecuted, 105.0});

  const std::string csv = trajectories_to_csv(log);
  // Header + 2 vehicles x 3 frames.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.find("0.2,1,hdv,105,100,MergeExecuted\n") != std::string::npos);
  const auto loaded = trajectories_from_csv(csv);
  REQUIRE(loaded.events.size() == 1);
  CHECK(loaded.events[0].kind == EventKind::MergeExecuted);
  CHECK(loaded.events[0].x == 105.0);
}

TEST_CASE("speeds table covers dedicated-lane frames only") {
  SimulationLog log;
  log.frames.push_back({0.0, 1, Lane::DedicatedCav, 100.0, 99.5});
  log.frames.push_back({0.0, 2, Lane::Hdv, 50.0, 80.0});
  const std::string csv = speeds_to_csv(log);
  CHECK(csv == "t_s,vehicle_id,v_kmh\n0,1,99.5\n");
}

TEST_CASE("metrics json is keyed and carries the schema version") {
  Scenario s = Scenario{};
  s.vehicles = {{1, Lane::DedicatedCav, Role::MlcCav, 100.0, 27.78, 27.78}};
  s.duration = 5.0;
  const auto result = run(s);
  const std::string json = metrics_to_json(
      result.metrics, summarize_timing(result.decision_seconds), s.planner, s.seed);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"planner\": \"pso\"") != std::string::npos);
  CHECK(json.find("\"mean_merge_position_m\": 100") != std::string::npos);
  CHECK(json.find("\"per_vehicle\"") != std::string::npos);
  CHECK(json.find("\"p95_s\"") != std::string::npos);
}

TEST_CASE("atomic write leaves no temporary behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mlc_io_test";
  fs::create_directories(dir);
  const fs::path target = dir / "out.csv";
  write_atomic(target, "hello\n");
  CHECK(read_file(target) == "hello\n");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
  // Unwritable destination fails with a diagnostic.
  CHECK_THROWS_AS(write_atomic(dir / "missing_dir" / "x.csv", "y"), std::runtime_error);
  fs::remove_all(dir);
}
