#pragma once

#include <span>
#include <vector>

#include "mlc/interval_set.hpp"
#include "mlc/kinematics.hpp"
#include "mlc/model.hpp"

namespace mlc {

// Uniform-speed prediction line x(t) = x_ref + v_ref * (t - t_ref). For an
// HDV, (x_ref, v_ref) is its current state and t_ref = 0; for a planned
// leader merge it is the merge state and t_ref = t_merge, extended backward
// over t < t_merge as the virtual-vehicle reservation.
struct PredictedLine {
  int vehicle_id = 0;
  double x_ref = 0.0;
  double v_ref = 0.0;
  double t_ref = 0.0;
  double position_at(double t) const { return x_ref + v_ref * (t - t_ref); }
};

// Selected trajectory of a higher-priority MLC CAV, as a constraint on the
// dedicated lane. t_merge is +inf when the leader has no feasible merge and
// is holding its fallback profile.
struct LeaderPlan {
  MlcProfile profile;
  double t_merge = 0.0;
  int index_gap = 1;  // number of vehicle positions between subject and leader in omega
};

// Planned merge of a higher-priority MLC CAV, as an HDV-lane reservation.
struct MergeReservation {
  int vehicle_id = 0;
  double t_merge = 0.0;
  double x_merge = 0.0;
  double v_merge = 0.0;
};

// Number of planning steps until even the slowest admissible profile has
// left the DZ: any profile travels at least cav_v_min, so no merge can
// happen after (x_end - x) / cav_v_min.
int planning_horizon(double x, const DzConfig& dz);

// Ascending KP grid {0, d_beta, ..., beta_max} with d_beta = beta_max /
// beta_levels. Collapses to {0} when the subject is already at floor speed.
std::vector<double> beta_grid(double v0, const DzConfig& dz);

// Positions claimable by some profile of the family, per step: the interval
// between the hardest-braking and the constant-speed trajectory (position is
// continuous and monotone decreasing in beta), clipped to the DZ.
StsIntervalSet reachable_set(double x0, double v0, double beta_hi,
                             const DzConfig& dz, int horizon);

// Minimum dedicated-lane spacing across index_gap vehicle positions:
// index_gap * cav_headway_min * cav_v_max.
double min_spacing(int index_gap, const DzConfig& dz);

// Positions keeping the required spacing behind every higher-priority plan.
// A leader constrains steps with k*dt <= its merge time (inclusive at the
// merge step) and drops out afterwards. No leaders -> the full DZ.
StsIntervalSet attainable_set(std::span<const LeaderPlan> leaders,
                              const DzConfig& dz, int horizon);

// One line per relevant HDV-lane vehicle plus one per planned leader merge.
std::vector<PredictedLine> predict_hdv_lane(
    std::span<const VehicleState> hdv_vehicles,
    std::span<const MergeReservation> reservations);

// DZ minus the open gap (x' - g, x' + g) around every predicted line, with
// g = hdv_headway_min * hdv_v_max. Lines outside the influence window
// [x_start - g, x_end + g] at a step impose nothing at that step. Boundary
// points |x - x'| = g are joinable.
StsIntervalSet joinable_set(std::span<const PredictedLine> lines,
                            const DzConfig& dz, int horizon);

// Per-step intersection reachable ∩ attainable ∩ joinable.
StsIntervalSet candidate_set(const StsIntervalSet& reachable,
                             const StsIntervalSet& attainable,
                             const StsIntervalSet& joinable);

}  // namespace mlc
