#include "mlc/interval_set.hpp"

#include <algorithm>
#include <cassert>

namespace mlc {

void canonicalize(IntervalList& list) {
  std::erase_if(list, [](const Interval& iv) { return iv.lo > iv.hi; });
  std::sort(list.begin(), list.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalList out;
  for (const Interval& iv : list) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  list = std::move(out);
}

bool is_canonical(const IntervalList& list) {
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].lo > list[i].hi) return false;
    if (i > 0 && list[i].lo <= list[i - 1].hi) return false;
  }
  return true;
}

IntervalList intersect(const IntervalList& a, const IntervalList& b) {
  assert(is_canonical(a) && is_canonical(b));
  IntervalList out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

void subtract_open(IntervalList& list, double lo, double hi) {
  assert(is_canonical(list));
  if (lo >= hi) return;  // empty open interval
  IntervalList out;
  out.reserve(list.size() + 1);
  for (const Interval& iv : list) {
    if (iv.hi <= lo || iv.lo >= hi) {
      out.push_back(iv);
      continue;
    }
    // Closed remainders; boundary points of the open gap survive.
    if (iv.lo <= lo) out.push_back({iv.lo, lo});
    if (iv.hi >= hi) out.push_back({hi, iv.hi});
  }
  list = std::move(out);
}

bool list_contains(const IntervalList& list, double x) {
  // Lists are short (a handful of gaps per step); linear scan is fine.
  for (const Interval& iv : list) {
    if (x < iv.lo) return false;
    if (x <= iv.hi) return true;
  }
  return false;
}

double total_length(const IntervalList& list) {
  double sum = 0.0;
  for (const Interval& iv : list) sum += iv.length();
  return sum;
}

StsIntervalSet StsIntervalSet::full(int horizon, double lo, double hi) {
  StsIntervalSet set(horizon);
  for (int k = 0; k <= horizon; ++k) set.at(k) = {{lo, hi}};
  return set;
}

bool StsIntervalSet::contains(int k, double x) const {
  if (k < 0 || k > horizon()) return false;
  return list_contains(at(k), x);
}

StsIntervalSet StsIntervalSet::intersect_with(const StsIntervalSet& other) const {
  assert(horizon() == other.horizon() && "horizon mismatch");
  StsIntervalSet out(horizon());
  for (int k = 0; k <= horizon(); ++k) {
    out.at(k) = intersect(at(k), other.at(k));
  }
  return out;
}

}  // namespace mlc
