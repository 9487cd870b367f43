#include "mlc/sts.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace mlc {

int planning_horizon(double x, const DzConfig& dz) {
  const double remaining = std::max(dz.x_end - x, 0.0);
  const int steps = static_cast<int>(std::ceil(remaining / (dz.cav_v_min * dz.dt)));
  return std::max(steps, 1);
}

std::vector<double> beta_grid(double v0, const DzConfig& dz) {
  if (v0 <= dz.cav_v_min) return {0.0};
  const double hi = beta_max(v0, dz.cav_v_min, dz.decel_max, dz.beta_cap);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(dz.beta_levels) + 1);
  for (int i = 0; i <= dz.beta_levels; ++i) {
    grid.push_back(hi * static_cast<double>(i) / static_cast<double>(dz.beta_levels));
  }
  return grid;
}

StsIntervalSet reachable_set(double x0, double v0, double beta_hi,
                             const DzConfig& dz, int horizon) {
  assert(horizon >= 1);
  StsIntervalSet set(horizon);
  const MlcProfile slow{x0, v0, dz.cav_v_min, beta_hi};
  const MlcProfile cruise{x0, v0, dz.cav_v_min, 0.0};
  for (int k = 0; k <= horizon; ++k) {
    const double t = k * dz.dt;
    const double lo = std::max(mlc_position(slow, t), dz.x_start);
    const double hi = std::min(mlc_position(cruise, t), dz.x_end);
    if (lo <= hi) set.at(k) = {{lo, hi}};
  }
  return set;
}

double min_spacing(int index_gap, const DzConfig& dz) {
  assert(index_gap >= 1 && "caller orders vehicles");
  return index_gap * dz.cav_headway_min * dz.cav_v_max;
}

StsIntervalSet attainable_set(std::span<const LeaderPlan> leaders,
                              const DzConfig& dz, int horizon) {
  assert(horizon >= 1);
  StsIntervalSet set(horizon);
  for (int k = 0; k <= horizon; ++k) {
    const double t = k * dz.dt;
    double bound = dz.x_end;
    for (const LeaderPlan& leader : leaders) {
      if (t > leader.t_merge) continue;  // constraint ends at the merge step
      const double ub =
          mlc_position(leader.profile, t) - min_spacing(leader.index_gap, dz);
      bound = std::min(bound, ub);
    }
    if (bound >= dz.x_start) set.at(k) = {{dz.x_start, bound}};
  }
  return set;
}

std::vector<PredictedLine> predict_hdv_lane(
    std::span<const VehicleState> hdv_vehicles,
    std::span<const MergeReservation> reservations) {
  std::vector<PredictedLine> lines;
  lines.reserve(hdv_vehicles.size() + reservations.size());
  for (const VehicleState& veh : hdv_vehicles) {
    lines.push_back({veh.id, veh.x, veh.v, 0.0});
  }
  for (const MergeReservation& res : reservations) {
    lines.push_back({res.vehicle_id, res.x_merge, res.v_merge, res.t_merge});
  }
  return lines;
}

StsIntervalSet joinable_set(std::span<const PredictedLine> lines,
                            const DzConfig& dz, int horizon) {
  assert(horizon >= 1);
  const double g = dz.hdv_gap();
  StsIntervalSet set(horizon);
  for (int k = 0; k <= horizon; ++k) {
    const double t = k * dz.dt;
    IntervalList step{{dz.x_start, dz.x_end}};
    for (const PredictedLine& line : lines) {
      const double xp = line.position_at(t);
      if (xp < dz.x_start - g || xp > dz.x_end + g) continue;
      subtract_open(step, xp - g, xp + g);
      if (step.empty()) break;
    }
    set.at(k) = std::move(step);
  }
  return set;
}

StsIntervalSet candidate_set(const StsIntervalSet& reachable,
                             const StsIntervalSet& attainable,
                             const StsIntervalSet& joinable) {
  return reachable.intersect_with(attainable).intersect_with(joinable);
}

}  // namespace mlc
