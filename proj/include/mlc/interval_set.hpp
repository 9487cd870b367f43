#pragma once

#include <span>
#include <vector>

namespace mlc {

// Closed interval [lo, hi]; lo == hi is a valid single point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
  double length() const { return hi - lo; }
};

using IntervalList = std::vector<Interval>;

// Sorts, drops inverted entries, merges overlapping or touching intervals.
void canonicalize(IntervalList& list);

bool is_canonical(const IntervalList& list);

// Both inputs canonical; result canonical.
IntervalList intersect(const IntervalList& a, const IntervalList& b);

// Removes the open interval (lo, hi) from a canonical list. Boundary points
// stay in: subtracting (c-g, c+g) from [a, b] keeps c-g and c+g.
void subtract_open(IntervalList& list, double lo, double hi);

bool list_contains(const IntervalList& list, double x);

double total_length(const IntervalList& list);

// Per-time-step family of admissible position intervals. Step k corresponds
// to time k*dt after the planning instant; steps 0..horizon inclusive.
class StsIntervalSet {
 public:
  StsIntervalSet() = default;
  explicit StsIntervalSet(int horizon) : steps_(static_cast<std::size_t>(horizon) + 1) {}

  static StsIntervalSet full(int horizon, double lo, double hi);

  int horizon() const { return static_cast<int>(steps_.size()) - 1; }

  const IntervalList& at(int k) const { return steps_[static_cast<std::size_t>(k)]; }
  IntervalList& at(int k) { return steps_[static_cast<std::size_t>(k)]; }

  // Exact interval arithmetic, no floating tolerance.
  bool contains(int k, double x) const;
  bool empty_at(int k) const { return at(k).empty(); }

  // Per-step intersection; horizons must match.
  StsIntervalSet intersect_with(const StsIntervalSet& other) const;

 private:
  std::vector<IntervalList> steps_;
};

}  // namespace mlc
