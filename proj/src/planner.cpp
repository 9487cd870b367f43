#include "mlc/planner.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace mlc {

double detour_cost(double x_merge, const DzConfig& dz, const CostParams& cp) {
  return std::exp(-cp.failure_rate_coeff * (dz.x_end - x_merge)) *
         cp.detour_distance / cp.detour_speed;
}

double merge_cost(double x_merge, double t_merge, double x_now, double v_now,
                  int n_followers, const DzConfig& dz, const CostParams& cp) {
  assert(v_now > 0.0);
  const double delay = n_followers * (t_merge - (x_merge - x_now) / v_now);
  return detour_cost(x_merge, dz, cp) + delay;
}

namespace {

// Tie-break: lower cost, then earlier merge, then smaller beta.
bool plan_improves(double c, double t, double beta, const TrajectoryPlan& best) {
  if (c != best.cost) return c < best.cost;
  if (t != best.t_merge) return t < best.t_merge;
  return beta < best.beta;
}

}  // namespace

std::optional<TrajectoryPlan> optimize_trajectory(const PlanningContext& ctx,
                                                  const DzConfig& dz) {
  assert(!ctx.betas.empty() && ctx.betas.front() == 0.0);
  assert(ctx.candidate.horizon() == ctx.horizon);

  if (ctx.joinable.contains(0, ctx.x)) {
    const double c = merge_cost(ctx.x, 0.0, ctx.x, ctx.v, ctx.n_followers, dz, ctx.cost);
    return TrajectoryPlan{0.0, 0.0, ctx.x, ctx.v, c};
  }

  std::optional<TrajectoryPlan> best;
  for (const double beta : ctx.betas) {
    const MlcProfile profile{ctx.x, ctx.v, dz.cav_v_min, beta};
    RowCost row(ctx.x, ctx.v, ctx.n_followers, dz, ctx.cost);
    bool prefix_attainable = true;  // steps 1..k-1 of this profile
    for (int k = 1; k <= ctx.horizon; ++k) {
      const double t = k * dz.dt;
      const double xk = mlc_position(profile, t);
      if (xk > dz.x_end) break;  // profile left the DZ; no later merge on this row
      const double c = row.advance(xk);
      // Row costs are strictly increasing in t, so once the cell cannot beat
      // the incumbent the rest of the row cannot either.
      if (best && (c > best->cost || (c == best->cost && t >= best->t_merge))) break;
      if (prefix_attainable && ctx.candidate.contains(k, xk)) {
        if (!best || plan_improves(c, t, beta, *best)) {
          best = TrajectoryPlan{beta, t, xk, mlc_speed(profile, t), c};
        }
        break;  // earliest feasible t is optimal within the row
      }
      prefix_attainable = prefix_attainable && ctx.attainable.contains(k, xk);
      if (!prefix_attainable) break;  // every later merge needs this step attainable
    }
  }
  return best;
}

double safe_hold_beta(const PlanningContext& ctx, const DzConfig& dz) {
  for (const double beta : ctx.betas) {
    const MlcProfile profile{ctx.x, ctx.v, dz.cav_v_min, beta};
    bool safe = true;
    for (int k = 1; k <= ctx.horizon; ++k) {
      const double xk = mlc_position(profile, k * dz.dt);
      if (xk > dz.x_end) break;
      if (!ctx.attainable.contains(k, xk)) {
        safe = false;
        break;
      }
    }
    if (safe) return beta;
  }
  return ctx.betas.back();
}

PlanStepResult plan_all(std::span<const VehicleState> vehicles,
                        const DzConfig& dz, const CostParams& cp) {
  PlanStepResult result;
  result.ordering = sort_and_classify(vehicles, dz);
  const SortedOrdering& ordering = result.ordering;

  std::unordered_map<int, const VehicleState*> by_id;
  by_id.reserve(vehicles.size());
  for (const VehicleState& veh : vehicles) by_id.emplace(veh.id, &veh);

  std::vector<VehicleState> hdv_lane;
  hdv_lane.reserve(ordering.pi.size());
  for (int id : ordering.pi) hdv_lane.push_back(*by_id.at(id));

  struct PlacedLeader {
    MlcProfile profile;
    double t_merge;
    int omega_index;  // 1-based
  };
  std::vector<PlacedLeader> leaders;
  std::vector<MergeReservation> reservations;

  const int total_in_dz = static_cast<int>(ordering.omega.size());
  for (std::size_t i = 0; i < ordering.omega_l.size(); ++i) {
    const VehicleState& subject = *by_id.at(ordering.omega_l[i]);
    const int omega_index = ordering.l_indices[i];

    PlanningContext ctx;
    ctx.x = subject.x;
    ctx.v = subject.v;
    ctx.n_followers = total_in_dz - omega_index;
    ctx.betas = beta_grid(subject.v, dz);
    ctx.horizon = planning_horizon(subject.x, dz);
    ctx.cost = cp;

    std::vector<LeaderPlan> constraints;
    constraints.reserve(leaders.size());
    for (const PlacedLeader& leader : leaders) {
      constraints.push_back(
          {leader.profile, leader.t_merge, omega_index - leader.omega_index});
    }
    ctx.reachable = reachable_set(subject.x, subject.v, ctx.betas.back(), dz, ctx.horizon);
    ctx.attainable = attainable_set(constraints, dz, ctx.horizon);
    const auto lines = predict_hdv_lane(hdv_lane, reservations);
    ctx.joinable = joinable_set(lines, dz, ctx.horizon);
    ctx.candidate = candidate_set(ctx.reachable, ctx.attainable, ctx.joinable);

    const auto t0 = std::chrono::steady_clock::now();
    std::optional<TrajectoryPlan> plan = optimize_trajectory(ctx, dz);
    const auto t1 = std::chrono::steady_clock::now();

    PlanOutcome outcome;
    outcome.vehicle_id = subject.id;
    outcome.decision_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (plan) {
      outcome.plan = *plan;
      outcome.executed_beta = plan->beta;
      outcome.merge_now = plan->t_merge == 0.0;
      if (outcome.merge_now) result.merge_ids.push_back(subject.id);
      reservations.push_back({subject.id, plan->t_merge, plan->x_merge, plan->v_merge});
      leaders.push_back({MlcProfile{subject.x, subject.v, dz.cav_v_min, plan->beta},
                         plan->t_merge, omega_index});
    } else {
      // No feasible merge: hold the least-braking profile that stays
      // attainable and replan next step. The vehicle is not merging, so it
      // reserves nothing on the HDV lane but still constrains followers.
      outcome.executed_beta = safe_hold_beta(ctx, dz);
      leaders.push_back(
          {MlcProfile{subject.x, subject.v, dz.cav_v_min, outcome.executed_beta},
           std::numeric_limits<double>::infinity(), omega_index});
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

}  // namespace mlc
