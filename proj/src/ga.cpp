#include "mlc/ga.hpp"

#include <algorithm>
#include <cassert>

namespace mlc {

double ga_min_headway(double x, const DzConfig& dz) {
  assert(x >= dz.x_start && x <= dz.x_end && "position outside the DZ");
  return (dz.x_end - x) / (dz.x_end - dz.x_start) * dz.hdv_headway_min;
}

GaDecision ga_step(const VehicleState& subject, std::optional<GaNeighbor> lead,
                   std::optional<GaNeighbor> lag, double mean_hdv_desired,
                   double jam_spacing, const DzConfig& dz, const GaParams& gp,
                   double dt) {
  assert(subject.role == Role::MlcCav && subject.lane == Lane::DedicatedCav);
  const double h = ga_min_headway(subject.x, dz);

  // The accepted spacing converts the position-dependent headway at the
  // lane's maximum speed, the same conversion the joinability rule uses for
  // the base headway; a gap always physically fits a vehicle.
  const double spacing_needed = std::max(h * dz.hdv_v_max, jam_spacing);
  const bool lead_ok = !lead || lead->x - subject.x >= spacing_needed;
  bool lag_ok = true;
  if (lag && gp.require_lag_gap) {
    lag_ok = subject.x - lag->x >= spacing_needed;
  } else if (lag) {
    lag_ok = subject.x - lag->x >= jam_spacing;
  }
  if (lead_ok && lag_ok) return {GaAction::MergeNow, subject.v};

  double target;
  if (gp.target_rule == GaTargetRule::AdjacentGapSpeed) {
    if (!lead_ok && lead) {
      // Too close to the new leader: match the adjacent stream's pace.
      target = lead->v;
    } else if (!lag_ok) {
      // Only the lag gap blocks: drop back behind it, toward the lane floor.
      target = dz.cav_v_min;
    } else {
      target = mean_hdv_desired;
    }
  } else {
    target = mean_hdv_desired;
  }
  target = std::max(target, dz.cav_v_min);
  if (subject.v <= target) return {GaAction::HoldSpeed, subject.v};
  const double v_next =
      std::max({target, subject.v - gp.comfort_decel * dt, dz.cav_v_min});
  return {GaAction::Decelerate, v_next};
}

}  // namespace mlc
