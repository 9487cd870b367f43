#pragma once

#include <optional>

#include "mlc/model.hpp"

namespace mlc {

enum class GaTargetRule { AdjacentGapSpeed, HdvDesiredMean };

struct GaParams {
  double comfort_decel = 2.0;  // m/s^2, gradual deceleration magnitude
  GaTargetRule target_rule = GaTargetRule::AdjacentGapSpeed;
  bool require_lag_gap = true;  // lead-only acceptance when false
};

enum class GaAction { MergeNow, Decelerate, HoldSpeed };

struct GaDecision {
  GaAction action = GaAction::HoldSpeed;
  double speed_next = 0.0;  // m/s, commanded speed when not merging
};

struct GaNeighbor {
  double x = 0.0;  // m
  double v = 0.0;  // m/s
};

// Position-dependent acceptance threshold: linear from hdv_headway_min at
// x_start down to 0 at x_end. x must lie inside the DZ.
double ga_min_headway(double x, const DzConfig& dz);

// Myopic gap-acceptance decision. Merge when the lead gap covers the
// threshold at the subject's speed and (unless disabled) the lag gap covers
// it at the lag vehicle's speed; both gaps must also physically fit a
// vehicle (jam_spacing). Otherwise decelerate at comfort_decel toward the
// target speed, holding once reached and never commanding below cav_v_min.
GaDecision ga_step(const VehicleState& subject, std::optional<GaNeighbor> lead,
                   std::optional<GaNeighbor> lag, double mean_hdv_desired,
                   double jam_spacing, const DzConfig& dz, const GaParams& gp,
                   double dt);

}  // namespace mlc
