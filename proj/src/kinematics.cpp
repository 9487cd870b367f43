#include "mlc/kinematics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace mlc {

double spring_damper_accel(double spacing, double speed, const SpringDamperParams& p) {
  return p.alpha * (spacing - p.spacing_desired) - p.beta * (speed - p.speed_desired);
}

double mlc_speed(const MlcProfile& p, double t) {
  assert(t >= 0.0);
  if (p.beta == 0.0 || p.v0 <= p.v_min) return p.v0;
  return p.v_min + (p.v0 - p.v_min) * std::exp(-p.beta * t);
}

double mlc_position(const MlcProfile& p, double t) {
  assert(t >= 0.0);
  if (p.beta == 0.0 || p.v0 <= p.v_min) return p.x0 + p.v0 * t;
  // Exact integral of the speed law; -expm1 keeps the beta -> 0 limit stable.
  return p.x0 + p.v_min * t + (p.v0 - p.v_min) * (-std::expm1(-p.beta * t)) / p.beta;
}

double beta_max(double v0, double v_min, double decel_max, double cap) {
  assert(decel_max > 0.0 && cap > 0.0);
  if (v0 <= v_min) return cap;
  return std::min(decel_max / (v0 - v_min), cap);
}

double predict_uniform(double x0, double v0, double t) { return x0 + v0 * t; }

void LeaderHistory::append(double t, double x, double v) {
  assert(samples_.empty() || t > samples_.back().t);
  samples_.push_back({t, x, v});
}

double LeaderHistory::position_at(double t) const {
  assert(!samples_.empty());
  const Sample& first = samples_.front();
  if (t <= first.t) return first.x - first.v * (first.t - t);
  const Sample& last = samples_.back();
  if (t >= last.t) return last.x + last.v * (t - last.t);
  // Samples are appended at strictly increasing times.
  auto hi = std::lower_bound(samples_.begin(), samples_.end(), t,
                             [](const Sample& s, double tt) { return s.t < tt; });
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->x + w * (hi->x - lo->x);
}

NewellNext newell_step(double x, double v_desired, const LeaderHistory* leader,
                       const NewellParams& p, double t_now, double dt) {
  assert(dt > 0.0);
  double x_next = x + std::max(v_desired, 0.0) * dt;
  if (leader != nullptr && !leader->empty()) {
    const double bound = leader->position_at(t_now + dt - p.lag()) - p.jam_spacing;
    x_next = std::min(x_next, bound);
  }
  x_next = std::max(x_next, x);  // vehicles do not reverse
  return {x_next, (x_next - x) / dt};
}

}  // namespace mlc
