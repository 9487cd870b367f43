#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "mlc/batch.hpp"
#include "mlc/io.hpp"

using namespace mlc;

namespace {

Scenario template_scenario() {
  Scenario s;
  s.generation = GenerationTemplate{};
  s.duration = 150.0;
  return s;
}

}  // namespace

TEST_CASE("timing summary") {
  const std::vector<double> samples{0.004, 0.001, 0.002, 0.003, 0.005};
  const auto t = summarize_timing(samples);
  CHECK(t.count == 5);
  CHECK(t.mean_seconds == doctest::Approx(0.003));
  CHECK(t.p95_seconds == 0.005);
  CHECK(t.max_seconds == 0.005);
  CHECK(summarize_timing({}).count == 0);
}

TEST_CASE("rows come back seed-major, planner-minor") {
  const std::vector<std::uint64_t> seeds{4, 9};
  const std::vector<PlannerKind> planners{PlannerKind::Pso, PlannerKind::Ga};
  const auto rows = run_batch(template_scenario(), seeds, planners, 1);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].seed == 4);
  CHECK(rows[0].planner == PlannerKind::Pso);
  CHECK(rows[1].seed == 4);
  CHECK(rows[1].planner == PlannerKind::Ga);
  CHECK(rows[2].seed == 9);
  CHECK(rows[3].seed == 9);
}

TEST_CASE("parallel batch is identical to the serial reference") {
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6};
  const std::vector<PlannerKind> planners{PlannerKind::Pso, PlannerKind::Ga};
  const Scenario base = template_scenario();
  const auto serial = run_batch(base, seeds, planners, 1);
  const auto parallel = run_batch(base, seeds, planners, 0);
  // The emitted summary carries no wall-clock fields, so it is bit-identical.
  CHECK(batch_summary_to_csv(serial) == batch_summary_to_csv(parallel));
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == parallel[i].seed);
    CHECK(serial[i].planner == parallel[i].planner);
    CHECK(serial[i].metrics.merged_count == parallel[i].metrics.merged_count);
    CHECK(serial[i].metrics.detour_count == parallel[i].metrics.detour_count);
    CHECK(serial[i].metrics.mean_merge_position ==
          parallel[i].metrics.mean_merge_position);
    CHECK(serial[i].metrics.mean_merge_time == parallel[i].metrics.mean_merge_time);
    CHECK(serial[i].metrics.avg_dz_speed_kmh == parallel[i].metrics.avg_dz_speed_kmh);
    CHECK(serial[i].metrics.avg_hdv_speed_kmh == parallel[i].metrics.avg_hdv_speed_kmh);
  }
}

TEST_CASE("batch summary csv shape") {
  const std::vector<std::uint64_t> seeds{1, 2};
  const std::vector<PlannerKind> planners{PlannerKind::Pso};
  const auto rows = run_batch(template_scenario(), seeds, planners, 1);
  const std::string csv = batch_summary_to_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
  CHECK(csv.rfind("seed,planner,", 0) == 0);
}
