#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mlc/model.hpp"
#include "mlc/sts.hpp"

namespace mlc {

struct CostParams {
  double detour_distance = 3000.0;          // m
  double detour_speed = kmh_to_ms(60.0);    // m/s
  double failure_rate_coeff = 0.046;        // 1/m
};

// Expected detour time: exp(-coeff*(x_end - x_merge)) * X_d/v_d.
double detour_cost(double x_merge, const DzConfig& dz, const CostParams& cp);

// Detour time plus expected follower delay, in seconds:
//   detour_cost(x_merge)
//   + n_followers * (t_merge - (x_merge - x_now)/v_now)
double merge_cost(double x_merge, double t_merge, double x_now, double v_now,
                  int n_followers, const DzConfig& dz, const CostParams& cp);

// Cell costs along one profile row, evaluated step by step. The delay term
// accumulates per-step increments clamped at zero (each is non-negative in
// exact arithmetic since the profile never exceeds the current speed), and
// the detour term is strictly increasing in position, so consecutive calls
// return strictly increasing values even at floating-point level. Both
// search routes must price cells through this evaluator so that their
// tie-breaks see identical doubles.
class RowCost {
 public:
  RowCost(double x_now, double v_now, int n_followers, const DzConfig& dz,
          const CostParams& cp)
      : x_prev_(x_now), v_now_(v_now), n_(n_followers), dz_(dz), cp_(cp) {}

  // Feed consecutive step positions of the row's profile.
  double advance(double x_step) {
    double inc = dz_.dt - (x_step - x_prev_) / v_now_;
    if (inc < 0.0) inc = 0.0;
    delay_ += inc;
    x_prev_ = x_step;
    return detour_cost(x_step, dz_, cp_) + n_ * delay_;
  }

 private:
  double x_prev_;
  double v_now_;
  double delay_ = 0.0;
  int n_;
  const DzConfig& dz_;
  const CostParams& cp_;
};

// A selected trajectory: the KP plus the predicted merge state it leads to.
struct TrajectoryPlan {
  double beta = 0.0;     // 1/s
  double t_merge = 0.0;  // s
  double x_merge = 0.0;  // m
  double v_merge = 0.0;  // m/s
  double cost = 0.0;     // s
};

// Everything one vehicle's trajectory optimization depends on.
struct PlanningContext {
  double x = 0.0;  // subject position now, m
  double v = 0.0;  // subject speed now, m/s
  int n_followers = 0;
  std::vector<double> betas;  // ascending KP grid, betas.front() == 0
  int horizon = 1;
  StsIntervalSet reachable;
  StsIntervalSet attainable;
  StsIntervalSet joinable;
  StsIntervalSet candidate;
  CostParams cost;
};

// Minimum-cost feasible trajectory, or nullopt when none exists.
//
// If the current position is joinable the immediate plan (beta = 0,
// t_merge = 0) is optimal, since cost is non-decreasing in merge time.
// Otherwise the (beta, t) grid is searched with two exact prunings:
//   - per beta, the earliest feasible t is row-optimal (cost is monotone
//     in t along a fixed profile), so each row stops at its first hit;
//   - along a row the scan stops as soon as the cell cost can no longer
//     beat the incumbent, which by the same monotonicity discards every
//     later cell of the row.
// A (beta, t) cell is feasible when its merge position lies in the
// candidate set and every intermediate step is attainable.
// Ties are broken toward smaller t_merge, then smaller beta.
std::optional<TrajectoryPlan> optimize_trajectory(const PlanningContext& ctx,
                                                  const DzConfig& dz);

// Fallback profile when no feasible trajectory exists: the smallest KP that
// keeps every step attainable until the profile leaves the DZ, or the
// hardest-braking KP when even that fails. beta = 0 whenever holding speed
// is safe.
double safe_hold_beta(const PlanningContext& ctx, const DzConfig& dz);

struct PlanOutcome {
  int vehicle_id = 0;
  std::optional<TrajectoryPlan> plan;  // nullopt: no feasible trajectory this step
  double executed_beta = 0.0;          // profile to follow until the next replan
  bool merge_now = false;
  double decision_seconds = 0.0;       // wall clock of optimize_trajectory
};

struct PlanStepResult {
  SortedOrdering ordering;
  std::vector<PlanOutcome> outcomes;  // priority (omega_l) order
  std::vector<int> merge_ids;         // vehicles executing a lane change now
};

// One pass of the prioritized planning loop over all MLC CAVs in the DZ,
// headmost first; each vehicle's sets are built from the plans of every
// higher-priority vehicle. Pure function of the inputs.
PlanStepResult plan_all(std::span<const VehicleState> vehicles,
                        const DzConfig& dz, const CostParams& cp);

}  // namespace mlc
