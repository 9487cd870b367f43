#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "mlc/model.hpp"

using namespace mlc;

namespace {

VehicleState cav(int id, double x, Role role = Role::MlcCav) {
  return {id, Lane::DedicatedCav, role, x, kmh_to_ms(100.0), kmh_to_ms(100.0)};
}

VehicleState hdv(int id, double x) {
  return {id, Lane::Hdv, Role::Hdv, x, kmh_to_ms(80.0), kmh_to_ms(90.0)};
}

}  // namespace

TEST_CASE("dz config validation") {
  DzConfig dz;
  CHECK_NOTHROW(dz.validate());
  dz.x_end = dz.x_start;
  CHECK_THROWS_AS(dz.validate(), std::invalid_argument);
  dz = DzConfig{};
  dz.cav_v_min = dz.cav_v_max;
  CHECK_THROWS_AS(dz.validate(), std::invalid_argument);
  dz = DzConfig{};
  dz.dt = 0.0;
  CHECK_THROWS_AS(dz.validate(), std::invalid_argument);
}

TEST_CASE("empty vehicle set") {
  const auto ordering = sort_and_classify({}, DzConfig{});
  CHECK(ordering.omega.empty());
  CHECK(ordering.omega_l.empty());
  CHECK(ordering.pi.empty());
}

TEST_CASE("cavs sorted headmost first with 1-based indices") {
  DzConfig dz;
  dz.x_start = 0.0;
  dz.x_end = 1500.0;
  std::vector<VehicleState> vehicles{cav(1, 100.0), cav(2, 700.0), cav(3, 400.0)};
  const auto ordering = sort_and_classify(vehicles, dz);
  CHECK(ordering.omega == std::vector<int>{2, 3, 1});
  CHECK(ordering.omega_l == std::vector<int>{2, 3, 1});
  CHECK(ordering.l_indices == std::vector<int>{1, 2, 3});
}

TEST_CASE("through cavs appear in omega but not omega_l") {
  DzConfig dz;
  std::vector<VehicleState> vehicles{cav(1, 500.0, Role::ThroughCav), cav(2, 300.0),
                                     cav(3, 100.0, Role::ThroughCav)};
  const auto ordering = sort_and_classify(vehicles, dz);
  CHECK(ordering.omega == std::vector<int>{1, 2, 3});
  CHECK(ordering.omega_l == std::vector<int>{2});
  CHECK(ordering.l_indices == std::vector<int>{2});
}

TEST_CASE("dz membership is boundary inclusive") {
  DzConfig dz;
  std::vector<VehicleState> vehicles{cav(1, dz.x_start), cav(2, dz.x_end),
                                     cav(3, dz.x_end + 0.001), cav(4, dz.x_start - 0.001)};
  const auto ordering = sort_and_classify(vehicles, dz);
  CHECK(ordering.omega == std::vector<int>{2, 1});
}

TEST_CASE("hdv influence window matches the prediction bound exactly") {
  DzConfig dz;
  const double margin = dz.hdv_headway_min * dz.hdv_v_max;
  std::vector<VehicleState> vehicles{
      hdv(11, dz.x_start - margin - 0.1),  // just outside
      hdv(12, dz.x_start - margin),        // exactly on the bound
      hdv(13, dz.x_end + margin),          // exactly on the upper bound
      hdv(14, dz.x_end + margin + 0.1),
      hdv(15, 750.0),
  };
  const auto ordering = sort_and_classify(vehicles, dz);
  CHECK(ordering.pi == std::vector<int>{13, 15, 12});
}

TEST_CASE("merged cavs on the hdv lane count as hdv-lane vehicles") {
  DzConfig dz;
  VehicleState merged{9, Lane::Hdv, Role::MergedCav, 600.0, 25.0, 25.0};
  const std::vector<VehicleState> vehicles{merged, hdv(11, 500.0)};
  const auto ordering = sort_and_classify(vehicles, dz);
  CHECK(ordering.pi == std::vector<int>{9, 11});
  CHECK(ordering.omega.empty());
}

TEST_CASE("duplicate ids rejected") {
  DzConfig dz;
  const std::vector<VehicleState> vehicles{cav(1, 100.0), cav(1, 200.0)};
  CHECK_THROWS_AS(sort_and_classify(vehicles, dz), std::invalid_argument);
}

TEST_CASE("same-lane position tie rejected") {
  DzConfig dz;
  const std::vector<VehicleState> vehicles{cav(1, 100.0), cav(2, 100.0)};
  CHECK_THROWS_AS(sort_and_classify(vehicles, dz), std::invalid_argument);
  // Different lanes may share a position.
  const std::vector<VehicleState> ok{cav(1, 100.0), hdv(2, 100.0)};
  CHECK_NOTHROW(sort_and_classify(ok, dz));
}

TEST_CASE("sorting is deterministic and strictly ordered") {
  DzConfig dz;
  std::vector<VehicleState> vehicles;
  for (int i = 0; i < 20; ++i) vehicles.push_back(cav(i + 1, 1400.0 - 37.0 * i));
  const auto a = sort_and_classify(vehicles, dz);
  const auto b = sort_and_classify(vehicles, dz);
  CHECK(a.omega == b.omega);
  for (std::size_t i = 1; i < a.omega.size(); ++i) {
    const double x_prev = vehicles[static_cast<std::size_t>(a.omega[i - 1] - 1)].x;
    const double x_here = vehicles[static_cast<std::size_t>(a.omega[i] - 1)].x;
    CHECK(x_prev > x_here);
  }
}
