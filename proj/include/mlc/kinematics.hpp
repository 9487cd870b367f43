#pragma once

#include <optional>
#include <vector>

namespace mlc {

// Spring-mass-damper car following: a = alpha*(dx - s~) - beta*(v - v~).
struct SpringDamperParams {
  double alpha = 0.0;            // 1/s^2, spacing sensitivity
  double beta = 0.0;             // 1/s, speed sensitivity
  double spacing_desired = 0.0;  // m
  double speed_desired = 0.0;    // m/s
};

double spring_damper_accel(double spacing, double speed, const SpringDamperParams& p);

// Deceleration profile of a lane-changing CAV: v' = -beta*(v - v_min).
// beta is the single kinematic parameter; beta = 0 is constant speed.
// Requires v0 >= v_min; v0 == v_min degenerates to constant speed for any beta.
struct MlcProfile {
  double x0 = 0.0;     // m
  double v0 = 0.0;     // m/s
  double v_min = 0.0;  // m/s
  double beta = 0.0;   // 1/s
};

double mlc_speed(const MlcProfile& p, double t);
double mlc_position(const MlcProfile& p, double t);

// Largest beta whose peak deceleration (at t = 0) equals decel_max:
// decel_max / (v0 - v_min). Capped at `cap` when v0 <= v_min, where the
// profile degenerates to constant speed and any beta is equivalent.
double beta_max(double v0, double v_min, double decel_max, double cap);

double predict_uniform(double x0, double v0, double t);

// Simplified Newell car following (HDV lane).
struct NewellParams {
  double wave_speed = 3.7;   // m/s
  double jam_spacing = 3.7;  // m
  double lag() const { return jam_spacing / wave_speed; }  // s
};

// Time-indexed position record of a leader. Queries before the earliest
// sample extrapolate backward at the earliest recorded speed, which covers
// scenario start and freshly merged vehicles.
class LeaderHistory {
 public:
  void append(double t, double x, double v);
  bool empty() const { return samples_.empty(); }
  double position_at(double t) const;  // linear interpolation between samples

 private:
  struct Sample {
    double t, x, v;
  };
  std::vector<Sample> samples_;
};

struct NewellNext {
  double x;
  double v;
};

// x(t+dt) = min(x + v_desired*dt, x_lead(t + dt - lag) - jam_spacing),
// clamped to be non-decreasing. Free-flow branch only when leader == nullptr.
NewellNext newell_step(double x, double v_desired, const LeaderHistory* leader,
                       const NewellParams& p, double t_now, double dt);

}  // namespace mlc
