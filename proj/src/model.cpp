#include "mlc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mlc {

const char* lane_name(Lane lane) {
  return lane == Lane::DedicatedCav ? "cav" : "hdv";
}

const char* role_name(Role role) {
  switch (role) {
    case Role::MlcCav: return "mlc";
    case Role::ThroughCav: return "through";
    case Role::Hdv: return "hdv";
    case Role::MergedCav: return "merged";
  }
  return "?";
}

void DzConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("dz config: " + what);
  };
  if (!(x_start < x_end)) fail("x_start must be < x_end");
  if (!(cav_v_min > 0.0)) fail("cav_v_min must be > 0");
  if (!(cav_v_min < cav_v_max)) fail("cav_v_min must be < cav_v_max");
  if (!(cav_headway_min > 0.0)) fail("cav_headway_min must be > 0");
  if (!(hdv_headway_min > 0.0)) fail("hdv_headway_min must be > 0");
  if (!(hdv_v_max > 0.0)) fail("hdv_v_max must be > 0");
  if (!(dt > 0.0)) fail("dt must be > 0");
  if (beta_levels < 1) fail("beta_levels must be >= 1");
  if (!(decel_max > 0.0)) fail("decel_max must be > 0");
  if (!(accel_max >= 0.0)) fail("accel_max must be >= 0");
  if (!(beta_cap > 0.0)) fail("beta_cap must be > 0");
}

SortedOrdering sort_and_classify(std::span<const VehicleState> vehicles,
                                 const DzConfig& dz) {
  std::unordered_set<int> seen;
  std::unordered_map<int, const VehicleState*> overlap_probe[2];
  for (const VehicleState& veh : vehicles) {
    if (!std::isfinite(veh.x) || !std::isfinite(veh.v)) {
      throw std::invalid_argument("vehicle " + std::to_string(veh.id) +
                                  ": non-finite state");
    }
    if (!seen.insert(veh.id).second) {
      throw std::invalid_argument("duplicate vehicle id " + std::to_string(veh.id));
    }
  }
  // Exact same-lane position ties are physically overlapping vehicles; the
  // motion models never produce them, so reject rather than tie-break.
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    for (std::size_t j = i + 1; j < vehicles.size(); ++j) {
      if (vehicles[i].lane == vehicles[j].lane && vehicles[i].x == vehicles[j].x) {
        throw std::invalid_argument(
            "vehicles " + std::to_string(vehicles[i].id) + " and " +
            std::to_string(vehicles[j].id) + " overlap at x=" +
            std::to_string(vehicles[i].x));
      }
    }
  }

  struct Entry {
    double x;
    int id;
    Role role;
  };
  std::vector<Entry> dz_cavs;
  std::vector<Entry> window_hdvs;
  const double margin = dz.hdv_gap();
  for (const VehicleState& veh : vehicles) {
    if (veh.lane == Lane::DedicatedCav) {
      if (veh.x >= dz.x_start && veh.x <= dz.x_end) {
        dz_cavs.push_back({veh.x, veh.id, veh.role});
      }
    } else {
      // Influence window is boundary-inclusive.
      if (veh.x >= dz.x_start - margin && veh.x <= dz.x_end + margin) {
        window_hdvs.push_back({veh.x, veh.id, veh.role});
      }
    }
  }
  auto headmost_first = [](const Entry& a, const Entry& b) { return a.x > b.x; };
  std::sort(dz_cavs.begin(), dz_cavs.end(), headmost_first);
  std::sort(window_hdvs.begin(), window_hdvs.end(), headmost_first);

  SortedOrdering out;
  out.omega.reserve(dz_cavs.size());
  for (std::size_t i = 0; i < dz_cavs.size(); ++i) {
    out.omega.push_back(dz_cavs[i].id);
    if (dz_cavs[i].role == Role::MlcCav) {
      out.omega_l.push_back(dz_cavs[i].id);
      out.l_indices.push_back(static_cast<int>(i) + 1);  // 1-based, headmost = 1
    }
  }
  out.pi.reserve(window_hdvs.size());
  for (const Entry& e : window_hdvs) out.pi.push_back(e.id);
  return out;
}

}  // namespace mlc
