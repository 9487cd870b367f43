#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mlc/ga.hpp"
#include "mlc/kinematics.hpp"
#include "mlc/model.hpp"
#include "mlc/planner.hpp"

namespace mlc {

enum class PlannerKind { Pso, Ga };

const char* planner_name(PlannerKind kind);

enum class EventKind { MergeExecuted, DetourExit, PlanInfeasible };

const char* event_name(EventKind kind);

// Frames mirror the trajectory-file schema, so speeds are recorded in km/h;
// everything else stays SI.
struct Frame {
  double t = 0.0;  // s
  int vehicle_id = 0;
  Lane lane = Lane::DedicatedCav;
  double x = 0.0;      // m
  double v_kmh = 0.0;  // km/h
};

struct Event {
  double t = 0.0;
  int vehicle_id = 0;
  EventKind kind = EventKind::MergeExecuted;
  double x = 0.0;  // m, position at the event
};

struct SimulationLog {
  std::vector<Frame> frames;  // ordered by (t, vehicle_id)
  std::vector<Event> events;
};

// HDVs arrive platooned: tight clusters of hdv_platoon_size vehicles with
// wider bands between clusters. Every spacing sits on top of the physical
// floor jam_spacing + hdv_headway_min * follower speed.
struct GenerationTemplate {
  int cav_count = 5;
  int hdv_count = 8;
  double cav_speed = kmh_to_ms(100.0);        // m/s
  double hdv_speed_min = kmh_to_ms(60.0);     // m/s
  double hdv_speed_max = kmh_to_ms(100.0);    // m/s
  double hdv_desired_min = kmh_to_ms(80.0);   // m/s
  double hdv_desired_max = kmh_to_ms(100.0);  // m/s
  double cav_lead_x = 72.0;                   // m, headmost CAV start
  double hdv_lead_x = 478.0;                  // m, headmost HDV start
  double cav_extra_spacing_max = 35.0;        // m, uniform slack above the minimum
  int hdv_platoon_size = 6;                   // vehicles per cluster
  double hdv_platoon_extra_max = 8.0;         // m, slack inside a cluster
  double hdv_band_extra_min = 166.0;          // m, slack between clusters
  double hdv_band_extra_max = 237.0;
};

struct Scenario {
  DzConfig dz;
  CostParams cost;
  GaParams ga;
  NewellParams newell;
  // Through-CAV spring-damper gains; desired spacing/speed <= 0 means
  // "derive from dz" (headway*v_max and v_max).
  SpringDamperParams cav_follow{0.1, 0.7, 0.0, 0.0};
  PlannerKind planner = PlannerKind::Pso;
  std::uint64_t seed = 1;
  double duration = 150.0;  // s
  std::vector<VehicleState> vehicles;
  std::optional<GenerationTemplate> generation;
};

// Throws std::invalid_argument naming the violated field or invariant.
void validate_scenario(const Scenario& s);

// Materializes the generation template into explicit vehicles,
// deterministically in seed. Throws when the template is absent or invalid.
Scenario generate_scenario(const Scenario& base, std::uint64_t seed);

struct VehicleMetrics {
  int id = 0;
  bool ever_dedicated = false;
  bool merged = false;
  bool detoured = false;
  double merge_time = 0.0;      // s, valid when merged
  double merge_position = 0.0;  // m
  double merge_speed_kmh = 0.0;
  std::optional<double> dz_speed_dedicated_kmh;  // mean while on dedicated lane in DZ
  std::optional<double> dz_speed_all_lanes_kmh;  // mean while in the DZ window, any lane
  int infeasible_steps = 0;
};

struct Metrics {
  int merged_count = 0;
  int detour_count = 0;
  std::optional<double> mean_merge_position;  // m, merged vehicles only
  std::optional<double> mean_merge_time;      // s
  // Mean of dedicated-lane speed samples inside [x_start, x_end].
  std::optional<double> avg_dz_speed_kmh;
  // Same window, but samples of ever-dedicated vehicles on any lane
  // (includes post-merge motion of the CAVs).
  std::optional<double> avg_dz_speed_all_lanes_kmh;
  // HDV-lane samples inside the window (merged CAVs included).
  std::optional<double> avg_hdv_speed_kmh;
  std::vector<VehicleMetrics> per_vehicle;  // sorted by id
};

// Derives every metric from the log alone.
Metrics compute_metrics(const SimulationLog& log, const DzConfig& dz);

// Deterministic discrete-time loop. Each step: plan (PSO priority pass or
// per-vehicle GA decisions), execute merge events with instantaneous lane
// insertion, record the frame, then advance both lanes by dt.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  void step();
  void run();  // steps until the duration elapses or every MLC CAV resolved
  bool finished() const { return finished_; }
  double time() const { return step_count_ * scenario_.dz.dt; }

  const Scenario& scenario() const { return scenario_; }
  const SimulationLog& log() const { return log_; }
  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const std::vector<double>& decision_seconds() const { return decision_seconds_; }

 private:
  void plan_merge_frame();
  void execute_merge(int id, double t);
  void move();
  VehicleState& vehicle(int id);

  Scenario scenario_;
  std::vector<VehicleState> vehicles_;
  std::unordered_map<int, LeaderHistory> histories_;
  std::unordered_set<int> detoured_;
  std::unordered_map<int, double> executed_beta_;  // PSO, current step
  std::unordered_map<int, double> ga_speed_cmd_;   // GA, current step
  SimulationLog log_;
  std::vector<double> decision_seconds_;
  int step_count_ = 0;
  int total_steps_ = 0;
  int initial_mlc_count_ = 0;
  bool finished_ = false;
};

struct RunResult {
  SimulationLog log;
  Metrics metrics;
  std::vector<double> decision_seconds;
};

RunResult run(const Scenario& scenario);

}  // namespace mlc
