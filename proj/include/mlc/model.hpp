#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlc/units.hpp"

namespace mlc {

enum class Lane { DedicatedCav, Hdv };
enum class Role { MlcCav, ThroughCav, Hdv, MergedCav };

const char* lane_name(Lane lane);
const char* role_name(Role role);

// Diverging-zone geometry and the shared planning constants.
struct DzConfig {
  double x_start = 0.0;    // m, start of the diverging zone
  double x_end = 1500.0;   // m, end of the diverging zone
  double cav_v_min = kmh_to_ms(60.0);   // m/s, dedicated-lane floor speed
  double cav_v_max = kmh_to_ms(100.0);  // m/s, dedicated-lane ceiling speed
  double cav_headway_min = 0.5;         // s
  double hdv_headway_min = 1.5;         // s
  double hdv_v_max = kmh_to_ms(100.0);  // m/s
  double dt = 0.2;                      // s, simulation/planning step
  int beta_levels = 50;     // KP grid resolution: beta in {0, d_beta, ..., beta_max}
  double decel_max = 4.0;   // m/s^2, braking magnitude bound
  double accel_max = 2.0;   // m/s^2, recorded; the MLC profile never accelerates
  double beta_cap = 2.0;    // 1/s, beta_max ceiling when the subject is already at floor speed

  // Half-width of the HDV-lane influence window and of the joinable gap.
  double hdv_gap() const { return hdv_headway_min * hdv_v_max; }

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

struct VehicleState {
  int id = 0;
  Lane lane = Lane::DedicatedCav;
  Role role = Role::ThroughCav;
  double x = 0.0;          // m
  double v = 0.0;          // m/s
  double v_desired = 0.0;  // m/s, HDV-lane free-flow target; unused on the dedicated lane
};

// Per-step classification of the traffic state (Alg. 1 steps 1-3).
struct SortedOrdering {
  std::vector<int> omega;      // dedicated-lane CAV ids inside the DZ, headmost first
  std::vector<int> omega_l;    // MLC subset of omega, order preserved
  std::vector<int> l_indices;  // 1-based index of each omega_l entry within omega
  std::vector<int> pi;         // HDV-lane ids inside the influence window, headmost first
};

// Pure function of its inputs. Throws std::invalid_argument on duplicate ids
// or two same-lane vehicles at an identical position.
SortedOrdering sort_and_classify(std::span<const VehicleState> vehicles,
                                 const DzConfig& dz);

}  // namespace mlc
