#include "mlc/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlc/rng.hpp"

namespace mlc {

const char* planner_name(PlannerKind kind) {
  return kind == PlannerKind::Pso ? "pso" : "ga";
}

const char* event_name(EventKind kind) {
  switch (kind) {
    case EventKind::MergeExecuted: return "MergeExecuted";
    case EventKind::DetourExit: return "DetourExit";
    case EventKind::PlanInfeasible: return "PlanInfeasible";
  }
  return "?";
}

namespace {

void fail(const std::string& what) { throw std::invalid_argument(what); }

template <typename MinSpacing>
void check_lane_spacing(const std::vector<VehicleState>& vehicles, Lane lane,
                        MinSpacing min_for, const char* label) {
  std::vector<const VehicleState*> in_lane;
  for (const VehicleState& v : vehicles) {
    if (v.lane == lane) in_lane.push_back(&v);
  }
  std::sort(in_lane.begin(), in_lane.end(),
            [](const VehicleState* a, const VehicleState* b) { return a->x > b->x; });
  for (std::size_t i = 1; i < in_lane.size(); ++i) {
    const double gap = in_lane[i - 1]->x - in_lane[i]->x;
    const double need = min_for(*in_lane[i]);
    if (gap < need - 1e-9) {
      fail(std::string("initial spacing violation on ") + label + " lane: vehicles " +
           std::to_string(in_lane[i - 1]->id) + "/" + std::to_string(in_lane[i]->id) +
           " gap " + std::to_string(gap) + " < " + std::to_string(need));
    }
  }
}

}  // namespace

void validate_scenario(const Scenario& s) {
  s.dz.validate();
  if (!(s.duration >= 0.0)) fail("duration must be >= 0");
  if (!(s.cost.detour_distance > 0.0)) fail("cost.detour_distance must be > 0");
  if (!(s.cost.detour_speed > 0.0)) fail("cost.detour_speed must be > 0");
  if (!(s.cost.failure_rate_coeff >= 0.0)) fail("cost.failure_rate_coeff must be >= 0");
  if (!(s.ga.comfort_decel > 0.0)) fail("ga.comfort_decel must be > 0");
  if (!(s.newell.wave_speed > 0.0)) fail("newell.wave_speed must be > 0");
  if (!(s.newell.jam_spacing > 0.0)) fail("newell.jam_spacing must be > 0");
  if (s.generation && !s.vehicles.empty()) {
    fail("explicit vehicles and a generation template are mutually exclusive");
  }

  std::unordered_set<int> ids;
  for (const VehicleState& v : s.vehicles) {
    const std::string tag = "vehicle " + std::to_string(v.id);
    if (!ids.insert(v.id).second) fail("duplicate vehicle id " + std::to_string(v.id));
    if (!std::isfinite(v.x) || !std::isfinite(v.v)) fail(tag + ": non-finite state");
    if (v.v < 0.0) fail(tag + ": speed must be >= 0");
    const bool on_hdv = v.lane == Lane::Hdv;
    if ((v.role == Role::Hdv || v.role == Role::MergedCav) != on_hdv) {
      fail(tag + ": role/lane mismatch");
    }
  }
  check_lane_spacing(
      s.vehicles, Lane::DedicatedCav,
      [&s](const VehicleState& follower) { return s.dz.cav_headway_min * follower.v; },
      "dedicated");
  check_lane_spacing(
      s.vehicles, Lane::Hdv,
      [&s](const VehicleState&) { return s.newell.jam_spacing; }, "hdv");
}

Scenario generate_scenario(const Scenario& base, std::uint64_t seed) {
  if (!base.generation) fail("scenario has no generation template");
  const GenerationTemplate& g = *base.generation;
  const DzConfig& dz = base.dz;
  if (g.cav_count < 0 || g.hdv_count < 0) fail("generation: counts must be >= 0");
  if (g.cav_speed < dz.cav_v_min || g.cav_speed > dz.cav_v_max) {
    fail("generation: cav_speed outside the dedicated-lane speed band");
  }
  if (!(g.hdv_speed_min >= 0.0) || g.hdv_speed_min > g.hdv_speed_max ||
      !(g.hdv_desired_min >= 0.0) || g.hdv_desired_min > g.hdv_desired_max) {
    fail("generation: hdv speed ranges invalid");
  }
  if (g.cav_extra_spacing_max < 0.0 || g.hdv_platoon_extra_max < 0.0 ||
      g.hdv_band_extra_min < 0.0 || g.hdv_band_extra_min > g.hdv_band_extra_max) {
    fail("generation: spacing slack ranges invalid");
  }
  if (g.hdv_platoon_size < 1) fail("generation: hdv_platoon_size must be >= 1");
  if (g.cav_count > 0 && g.cav_lead_x > dz.x_end) {
    fail("generation: cav_lead_x beyond the DZ end");
  }

  Scenario out = base;
  out.seed = seed;
  out.generation.reset();
  out.vehicles.clear();
  Rng rng(seed);
  double x = g.cav_lead_x;
  for (int i = 0; i < g.cav_count; ++i) {
    if (i > 0) {
      x -= dz.cav_headway_min * g.cav_speed + rng.uniform(0.0, g.cav_extra_spacing_max);
    }
    out.vehicles.push_back(
        {i + 1, Lane::DedicatedCav, Role::MlcCav, x, g.cav_speed, g.cav_speed});
  }
  x = g.hdv_lead_x;
  for (int j = 0; j < g.hdv_count; ++j) {
    const double v = rng.uniform(g.hdv_speed_min, g.hdv_speed_max);
    const double vd = rng.uniform(g.hdv_desired_min, g.hdv_desired_max);
    if (j > 0) {
      const bool band = j % g.hdv_platoon_size == 0;
      const double slack = band
                               ? rng.uniform(g.hdv_band_extra_min, g.hdv_band_extra_max)
                               : rng.uniform(0.0, g.hdv_platoon_extra_max);
      x -= base.newell.jam_spacing + dz.hdv_headway_min * v + slack;
    }
    out.vehicles.push_back({101 + j, Lane::Hdv, Role::Hdv, x, v, vd});
  }
  validate_scenario(out);
  return out;
}

Metrics compute_metrics(const SimulationLog& log, const DzConfig& dz) {
  Metrics m;
  if (log.frames.empty() && log.events.empty()) return m;

  std::unordered_set<int> ever_dedicated;
  for (const Frame& f : log.frames) {
    if (f.lane == Lane::DedicatedCav) ever_dedicated.insert(f.vehicle_id);
  }

  struct Acc {
    double sum = 0.0;
    int n = 0;
    void add(double x) { sum += x; ++n; }
    std::optional<double> mean() const {
      if (n == 0) return std::nullopt;
      return sum / n;
    }
  };
  Acc dz_dedicated, dz_all, hdv_lane;
  std::unordered_map<int, Acc> per_dedicated, per_all;
  std::vector<int> ids_in_order;
  std::unordered_set<int> ids_seen;

  for (const Frame& f : log.frames) {
    if (ids_seen.insert(f.vehicle_id).second) ids_in_order.push_back(f.vehicle_id);
    const bool in_window = f.x >= dz.x_start && f.x <= dz.x_end;
    if (!in_window) continue;
    if (f.lane == Lane::DedicatedCav) {
      dz_dedicated.add(f.v_kmh);
      per_dedicated[f.vehicle_id].add(f.v_kmh);
    } else {
      hdv_lane.add(f.v_kmh);
    }
    if (ever_dedicated.count(f.vehicle_id) != 0) {
      dz_all.add(f.v_kmh);
      per_all[f.vehicle_id].add(f.v_kmh);
    }
  }
  m.avg_dz_speed_kmh = dz_dedicated.mean();
  m.avg_dz_speed_all_lanes_kmh = dz_all.mean();
  m.avg_hdv_speed_kmh = hdv_lane.mean();

  std::unordered_map<int, VehicleMetrics> per;
  for (int id : ids_in_order) {
    VehicleMetrics vm;
    vm.id = id;
    vm.ever_dedicated = ever_dedicated.count(id) != 0;
    if (auto it = per_dedicated.find(id); it != per_dedicated.end()) {
      vm.dz_speed_dedicated_kmh = it->second.mean();
    }
    if (auto it = per_all.find(id); it != per_all.end()) {
      vm.dz_speed_all_lanes_kmh = it->second.mean();
    }
    per.emplace(id, vm);
  }

  double merge_pos_sum = 0.0, merge_time_sum = 0.0;
  for (const Event& e : log.events) {
    auto it = per.find(e.vehicle_id);
    if (it == per.end()) {
      VehicleMetrics vm;
      vm.id = e.vehicle_id;
      it = per.emplace(e.vehicle_id, vm).first;
      ids_in_order.push_back(e.vehicle_id);
    }
    VehicleMetrics& vm = it->second;
    switch (e.kind) {
      case EventKind::MergeExecuted:
        vm.merged = true;
        vm.merge_time = e.t;
        vm.merge_position = e.x;
        ++m.merged_count;
        merge_pos_sum += e.x;
        merge_time_sum += e.t;
        break;
      case EventKind::DetourExit:
        vm.detoured = true;
        ++m.detour_count;
        break;
      case EventKind::PlanInfeasible:
        ++vm.infeasible_steps;
        break;
    }
  }
  for (const Frame& f : log.frames) {
    auto it = per.find(f.vehicle_id);
    if (it != per.end() && it->second.merged && f.t == it->second.merge_time) {
      it->second.merge_speed_kmh = f.v_kmh;
    }
  }
  if (m.merged_count > 0) {
    m.mean_merge_position = merge_pos_sum / m.merged_count;
    m.mean_merge_time = merge_time_sum / m.merged_count;
  }

  std::sort(ids_in_order.begin(), ids_in_order.end());
  for (int id : ids_in_order) m.per_vehicle.push_back(per.at(id));
  return m;
}

namespace {

// Largest next-step speed keeping spacing >= headway*speed against a leader
// moving at v_lead, with enough room to shed any speed excess at decel d:
//   gap - v*dt >= h*v + (v - v_lead)^2 / (2d)   for v > v_lead.
double reactive_speed_cap(double gap_next, double v_lead, double headway,
                          double dt, double decel) {
  const double linear = gap_next / (dt + headway);
  if (linear <= v_lead) return linear;  // quadratic term inactive at the bound
  // Root of v^2/(2d) + v*(dt + h - v_lead/d) + v_lead^2/(2d) - gap_next = 0.
  const double b = dt + headway - v_lead / decel;
  const double c = v_lead * v_lead / (2.0 * decel) - gap_next;
  const double disc = b * b - 2.0 * c / decel;
  if (disc <= 0.0) return v_lead;
  const double root = decel * (-b + std::sqrt(disc));
  return std::max(root, v_lead);
}

}  // namespace

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
  if (scenario_.generation) {
    scenario_ = generate_scenario(scenario_, scenario_.seed);
  }
  validate_scenario(scenario_);
  if (scenario_.cav_follow.spacing_desired <= 0.0) {
    scenario_.cav_follow.spacing_desired =
        scenario_.dz.cav_headway_min * scenario_.dz.cav_v_max;
  }
  if (scenario_.cav_follow.speed_desired <= 0.0) {
    scenario_.cav_follow.speed_desired = scenario_.dz.cav_v_max;
  }
  vehicles_ = scenario_.vehicles;
  for (const VehicleState& v : vehicles_) {
    if (v.role == Role::MlcCav) ++initial_mlc_count_;
  }
  total_steps_ = static_cast<int>(std::floor(scenario_.duration / scenario_.dz.dt + 1e-9));
  if (total_steps_ == 0) finished_ = true;  // duration 0: empty log
}

VehicleState& Simulation::vehicle(int id) {
  for (VehicleState& v : vehicles_) {
    if (v.id == id) return v;
  }
  throw std::logic_error("unknown vehicle id " + std::to_string(id));
}

void Simulation::execute_merge(int id, double t) {
  VehicleState& veh = vehicle(id);
  assert(veh.lane == Lane::DedicatedCav && veh.role == Role::MlcCav);
  veh.lane = Lane::Hdv;
  veh.role = Role::MergedCav;
  veh.v_desired = veh.v;

  const double jam = scenario_.newell.jam_spacing;
  for (const VehicleState& other : vehicles_) {
    if (other.id == id || other.lane != Lane::Hdv) continue;
    if (std::abs(other.x - veh.x) < jam - 1e-9) {
      throw std::runtime_error(
          "post-merge spacing violation on the HDV lane: vehicle " +
          std::to_string(id) + " inserted at x=" + std::to_string(veh.x) +
          " within jam spacing of vehicle " + std::to_string(other.id));
    }
  }
  log_.events.push_back({t, id, EventKind::MergeExecuted, veh.x});
}

void Simulation::plan_merge_frame() {
  const DzConfig& dz = scenario_.dz;
  const double t = time();
  executed_beta_.clear();
  ga_speed_cmd_.clear();

  std::vector<int> ids;
  ids.reserve(vehicles_.size());
  for (const VehicleState& v : vehicles_) ids.push_back(v.id);
  std::sort(ids.begin(), ids.end());

  // Detour exits: MLC CAVs past the DZ end leave on the dedicated lane.
  for (int id : ids) {
    VehicleState& veh = vehicle(id);
    if (veh.role == Role::MlcCav && veh.x > dz.x_end && detoured_.insert(id).second) {
      log_.events.push_back({t, id, EventKind::DetourExit, veh.x});
    }
  }

  if (scenario_.planner == PlannerKind::Pso) {
    const PlanStepResult result = plan_all(vehicles_, dz, scenario_.cost);
    for (const PlanOutcome& outcome : result.outcomes) {
      decision_seconds_.push_back(outcome.decision_seconds);
      executed_beta_[outcome.vehicle_id] = outcome.executed_beta;
      if (!outcome.plan) {
        log_.events.push_back({t, outcome.vehicle_id, EventKind::PlanInfeasible,
                               vehicle(outcome.vehicle_id).x});
      }
    }
    for (int id : result.merge_ids) execute_merge(id, t);
  } else {
    // GA decisions, headmost first; each sees merges already executed this step.
    std::vector<int> subjects;
    for (const VehicleState& v : vehicles_) {
      if (v.role == Role::MlcCav && v.lane == Lane::DedicatedCav &&
          v.x >= dz.x_start && v.x <= dz.x_end) {
        subjects.push_back(v.id);
      }
    }
    std::sort(subjects.begin(), subjects.end(),
              [this](int a, int b) { return vehicle(a).x > vehicle(b).x; });
    double desired_sum = 0.0;
    int desired_n = 0;
    for (const VehicleState& v : vehicles_) {
      if (v.role == Role::Hdv) {
        desired_sum += v.v_desired;
        ++desired_n;
      }
    }
    const double mean_desired =
        desired_n > 0 ? desired_sum / desired_n : scenario_.dz.cav_v_min;
    for (int id : subjects) {
      const VehicleState& subject = vehicle(id);
      std::optional<GaNeighbor> lead, lag;
      for (const VehicleState& other : vehicles_) {
        if (other.lane != Lane::Hdv) continue;
        if (other.x > subject.x && (!lead || other.x < lead->x)) {
          lead = GaNeighbor{other.x, other.v};
        }
        if (other.x < subject.x && (!lag || other.x > lag->x)) {
          lag = GaNeighbor{other.x, other.v};
        }
      }
      const GaDecision decision =
          ga_step(subject, lead, lag, mean_desired, scenario_.newell.jam_spacing,
                  dz, scenario_.ga, dz.dt);
      if (decision.action == GaAction::MergeNow) {
        execute_merge(id, t);
      } else {
        ga_speed_cmd_[id] = decision.speed_next;
      }
    }
  }

  // One history sample per HDV-lane vehicle per step; freshly merged CAVs
  // get their first sample here and are extrapolated backward before it.
  for (int id : ids) {
    const VehicleState& veh = vehicle(id);
    if (veh.lane == Lane::Hdv) histories_[id].append(t, veh.x, veh.v);
  }
  for (int id : ids) {
    const VehicleState& veh = vehicle(id);
    log_.frames.push_back({t, id, veh.lane, veh.x, ms_to_kmh(veh.v)});
  }
}

void Simulation::move() {
  const DzConfig& dz = scenario_.dz;
  const double t = time();
  const double dt = dz.dt;

  struct Next {
    std::size_t index;
    double x, v;
  };

  // Dedicated lane, headmost first, so each follower can be checked against
  // its leader's committed next state.
  std::vector<std::size_t> dedicated;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (vehicles_[i].lane == Lane::DedicatedCav) dedicated.push_back(i);
  }
  std::sort(dedicated.begin(), dedicated.end(), [this](std::size_t a, std::size_t b) {
    return vehicles_[a].x > vehicles_[b].x;
  });
  std::vector<Next> next;
  next.reserve(vehicles_.size());
  bool has_leader = false;
  double leader_x_now = 0.0, leader_x_next = 0.0, leader_v_next = 0.0;
  for (std::size_t idx : dedicated) {
    const VehicleState& veh = vehicles_[idx];
    double x_next, v_next;
    const bool in_dz = veh.x >= dz.x_start && veh.x <= dz.x_end;
    const bool planned = scenario_.planner == PlannerKind::Pso &&
                         veh.role == Role::MlcCav && in_dz &&
                         !detoured_.contains(veh.id);
    if (veh.role == Role::MlcCav && in_dz && !detoured_.contains(veh.id)) {
      if (scenario_.planner == PlannerKind::Pso) {
        const auto it = executed_beta_.find(veh.id);
        const double beta = it != executed_beta_.end() ? it->second : 0.0;
        const MlcProfile profile{veh.x, veh.v, dz.cav_v_min, beta};
        x_next = mlc_position(profile, dt);
        v_next = mlc_speed(profile, dt);
      } else {
        const auto it = ga_speed_cmd_.find(veh.id);
        v_next = it != ga_speed_cmd_.end() ? it->second : veh.v;
        x_next = veh.x + v_next * dt;
      }
    } else if (veh.role == Role::ThroughCav) {
      const SpringDamperParams& p = scenario_.cav_follow;
      double accel;
      if (has_leader) {
        accel = spring_damper_accel(leader_x_now - veh.x, veh.v, p);
      } else {
        accel = -p.beta * (veh.v - p.speed_desired);  // free road, spacing term off
      }
      accel = std::clamp(accel, -dz.decel_max, dz.accel_max);
      v_next = std::max(veh.v + accel * dt, 0.0);
      x_next = veh.x + v_next * dt;
    } else {
      // Upstream of the DZ or detoured past it: cruise.
      v_next = veh.v;
      x_next = veh.x + veh.v * dt;
    }

    // Safety governor against the leader's committed next state. Planned
    // PSO motion already respects the minimum-spacing constraints against
    // known leader trajectories, so it only gets the next-frame envelope;
    // reactive vehicles (GA, through, cruising) face unknown leader futures
    // and keep a braking-distance margin on top of the headway.
    if (has_leader) {
      const double h = dz.cav_headway_min;
      const double cap = planned
                             ? (leader_x_next - veh.x) / (dt + h)
                             : reactive_speed_cap(leader_x_next - veh.x,
                                                  leader_v_next, h, dt, dz.decel_max);
      if (v_next > cap) {
        v_next = std::max({cap, veh.v - dz.decel_max * dt, 0.0});
        x_next = veh.x + v_next * dt;
      }
      // Physical last resort: never close within jam spacing of the leader.
      const double wall = leader_x_next - scenario_.newell.jam_spacing;
      if (x_next > wall) {
        x_next = std::max(wall, veh.x);
        v_next = (x_next - veh.x) / dt;
      }
    }
    next.push_back({idx, x_next, v_next});
    has_leader = true;
    leader_x_now = veh.x;
    leader_x_next = x_next;
    leader_v_next = v_next;
  }

  // HDV lane: Newell followers against leader histories (time-lagged, so
  // order within the pass does not matter).
  std::vector<std::size_t> hdv;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (vehicles_[i].lane == Lane::Hdv) hdv.push_back(i);
  }
  std::sort(hdv.begin(), hdv.end(), [this](std::size_t a, std::size_t b) {
    return vehicles_[a].x > vehicles_[b].x;
  });
  const VehicleState* leader = nullptr;
  for (std::size_t idx : hdv) {
    const VehicleState& veh = vehicles_[idx];
    const LeaderHistory* history = nullptr;
    if (leader != nullptr) history = &histories_.at(leader->id);
    NewellNext nn = newell_step(veh.x, veh.v_desired, history, scenario_.newell, t, dt);
    // Speed-ups obey the acceleration bound (staying below the Newell bound
    // is always safe); slow-downs keep the exact Newell rule, since jam
    // spacing outranks the braking clamp.
    const double v_capped = veh.v + dz.accel_max * dt;
    if (nn.v > v_capped) {
      nn.v = v_capped;
      nn.x = veh.x + v_capped * dt;
    }
    next.push_back({idx, nn.x, nn.v});
    leader = &veh;
  }

  for (const Next& n : next) {
    vehicles_[n.index].x = n.x;
    vehicles_[n.index].v = n.v;
  }
}

void Simulation::step() {
  if (finished_) return;
  plan_merge_frame();
  const bool all_resolved =
      initial_mlc_count_ > 0 &&
      std::none_of(vehicles_.begin(), vehicles_.end(), [this](const VehicleState& v) {
        return v.role == Role::MlcCav && !detoured_.contains(v.id);
      });
  if (all_resolved || step_count_ >= total_steps_) {
    finished_ = true;
    return;
  }
  move();
  ++step_count_;
}

void Simulation::run() {
  while (!finished_) step();
}

RunResult run(const Scenario& scenario) {
  Simulation sim(scenario);
  sim.run();
  return {sim.log(), compute_metrics(sim.log(), sim.scenario().dz),
          sim.decision_seconds()};
}

}  // namespace mlc
