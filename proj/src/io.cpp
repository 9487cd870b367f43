#include "mlc/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

#include "json.hpp"

namespace mlc {

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::logic_error("format_double failed");
  return std::string(buf, end);
}

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view origin, const std::string& what) {
  throw std::invalid_argument(std::string(origin) + ": " + what);
}

double parse_double(std::string_view origin, const std::string& key,
                    std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || end != last) {
    fail(origin, key + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

struct IniEntry {
  std::string key;
  std::string value;
};

struct IniFile {
  // "" holds the top-level keys.
  std::map<std::string, std::vector<IniEntry>> sections;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

IniFile parse_ini(std::string_view text, std::string_view origin) {
  IniFile file;
  std::string section;
  file.sections[section];
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(origin, "line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      file.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(origin, "line " + std::to_string(line_no) + ": expected key = value");
    }
    file.sections[section].push_back({std::string(trim(line.substr(0, eq))),
                                      std::string(trim(line.substr(eq + 1)))});
  }
  return file;
}

// Pulls typed values out of one section and rejects leftovers.
class SectionReader {
 public:
  SectionReader(const IniFile& file, std::string section, std::string_view origin)
      : origin_(origin), section_(std::move(section)) {
    if (auto it = file.sections.find(section_); it != file.sections.end()) {
      for (const IniEntry& e : it->second) entries_.push_back(&e);
    }
  }

  bool present() const { return !entries_.empty(); }

  std::optional<std::string> take(const std::string& key) {
    std::optional<std::string> found;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i]->key == key) {
        if (found) fail(origin_, tag(key) + ": duplicate key");
        found = entries_[i]->value;
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
      }
    }
    return found;
  }

  double number(const std::string& key, double fallback) {
    const auto v = take(key);
    return v ? parse_double(origin_, tag(key), *v) : fallback;
  }

  double required_number(const std::string& key) {
    const auto v = take(key);
    if (!v) fail(origin_, tag(key) + ": mandatory field missing");
    return parse_double(origin_, tag(key), *v);
  }

  double speed_kmh(const std::string& key, double fallback_ms) {
    const auto v = take(key);
    return v ? kmh_to_ms(parse_double(origin_, tag(key), *v)) : fallback_ms;
  }

  int integer(const std::string& key, int fallback) {
    const double d = number(key, fallback);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) fail(origin_, tag(key) + ": expected an integer");
    return i;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto v = take(key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    fail(origin_, tag(key) + ": expected true or false");
  }

  void finish() {
    if (!entries_.empty()) {
      fail(origin_, tag(entries_.front()->key) + ": unknown key");
    }
  }

  std::string tag(const std::string& key) const {
    return section_.empty() ? key : "[" + section_ + "] " + key;
  }

  std::string_view origin() const { return origin_; }

 private:
  std::string_view origin_;
  std::string section_;
  std::vector<const IniEntry*> entries_;
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(sep, start);
    out.emplace_back(s.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::stringstream ss{std::string(s)};
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

VehicleState parse_vehicle_line(std::string_view origin, const std::string& value) {
  const auto toks = tokens(value);
  if (toks.size() < 5 || toks.size() > 6) {
    fail(origin, "[vehicles] vehicle: expected '<id> <cav|hdv> <mlc|through|hdv|merged>"
                 " <x_m> <v_kmh> [<v_desired_kmh>]', got '" + value + "'");
  }
  VehicleState v;
  v.id = static_cast<int>(parse_double(origin, "[vehicles] vehicle id", toks[0]));
  if (toks[1] == "cav") {
    v.lane = Lane::DedicatedCav;
  } else if (toks[1] == "hdv") {
    v.lane = Lane::Hdv;
  } else {
    fail(origin, "[vehicles] vehicle " + toks[0] + ": unknown lane '" + toks[1] + "'");
  }
  if (toks[2] == "mlc") {
    v.role = Role::MlcCav;
  } else if (toks[2] == "through") {
    v.role = Role::ThroughCav;
  } else if (toks[2] == "hdv") {
    v.role = Role::Hdv;
  } else if (toks[2] == "merged") {
    v.role = Role::MergedCav;
  } else {
    fail(origin, "[vehicles] vehicle " + toks[0] + ": unknown role '" + toks[2] + "'");
  }
  v.x = parse_double(origin, "[vehicles] vehicle x_m", toks[3]);
  v.v = kmh_to_ms(parse_double(origin, "[vehicles] vehicle v_kmh", toks[4]));
  v.v_desired = toks.size() == 6
                    ? kmh_to_ms(parse_double(origin, "[vehicles] vehicle v_desired_kmh",
                                             toks[5]))
                    : v.v;
  return v;
}

json to_json(const TimingSummary& t) {
  return {{"count", t.count},
          {"mean_s", t.mean_seconds},
          {"p95_s", t.p95_seconds},
          {"max_s", t.max_seconds}};
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json metrics_to_json_obj(const Metrics& m) {
  json per = json::array();
  for (const VehicleMetrics& vm : m.per_vehicle) {
    json row = {{"id", vm.id},
                {"ever_dedicated", vm.ever_dedicated},
                {"merged", vm.merged},
                {"detoured", vm.detoured},
                {"infeasible_steps", vm.infeasible_steps},
                {"dz_speed_dedicated_kmh", optional_number(vm.dz_speed_dedicated_kmh)},
                {"dz_speed_all_lanes_kmh", optional_number(vm.dz_speed_all_lanes_kmh)}};
    if (vm.merged) {
      row["merge_time_s"] = vm.merge_time;
      row["merge_position_m"] = vm.merge_position;
      row["merge_speed_kmh"] = vm.merge_speed_kmh;
    }
    per.push_back(std::move(row));
  }
  return {{"merged_count", m.merged_count},
          {"detour_count", m.detour_count},
          {"mean_merge_position_m", optional_number(m.mean_merge_position)},
          {"mean_merge_time_s", optional_number(m.mean_merge_time)},
          {"avg_dz_speed_kmh", optional_number(m.avg_dz_speed_kmh)},
          {"avg_dz_speed_all_lanes_kmh", optional_number(m.avg_dz_speed_all_lanes_kmh)},
          {"avg_hdv_speed_kmh", optional_number(m.avg_hdv_speed_kmh)},
          {"per_vehicle", std::move(per)}};
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, std::string_view origin) {
  const IniFile file = parse_ini(text, origin);
  for (const auto& [name, _] : file.sections) {
    if (name != "" && name != "dz" && name != "cost" && name != "ga" &&
        name != "newell" && name != "generation" && name != "vehicles") {
      fail(origin, "unknown section [" + name + "]");
    }
  }

  Scenario s;
  SectionReader top(file, "", origin);
  if (const auto planner = top.take("planner")) {
    if (*planner == "pso") {
      s.planner = PlannerKind::Pso;
    } else if (*planner == "ga") {
      s.planner = PlannerKind::Ga;
    } else {
      fail(origin, "planner: expected pso or ga, got '" + *planner + "'");
    }
  }
  s.duration = top.required_number("duration_s");
  if (!(s.duration > 0.0)) fail(origin, "duration_s: must be > 0");
  const double seed = top.number("seed", 1.0);
  if (seed < 0.0 || seed != std::floor(seed)) {
    fail(origin, "seed: expected a non-negative integer");
  }
  s.seed = static_cast<std::uint64_t>(seed);
  top.finish();

  SectionReader dz(file, "dz", origin);
  s.dz.x_start = dz.number("x_start_m", s.dz.x_start);
  s.dz.x_end = dz.number("x_end_m", s.dz.x_end);
  s.dz.cav_v_min = dz.speed_kmh("cav_v_min_kmh", s.dz.cav_v_min);
  s.dz.cav_v_max = dz.speed_kmh("cav_v_max_kmh", s.dz.cav_v_max);
  s.dz.cav_headway_min = dz.number("cav_headway_min_s", s.dz.cav_headway_min);
  s.dz.hdv_headway_min = dz.number("hdv_headway_min_s", s.dz.hdv_headway_min);
  s.dz.hdv_v_max = dz.speed_kmh("hdv_v_max_kmh", s.dz.hdv_v_max);
  s.dz.dt = dz.number("dt_s", s.dz.dt);
  s.dz.beta_levels = dz.integer("beta_levels", s.dz.beta_levels);
  s.dz.decel_max = dz.number("decel_max_ms2", s.dz.decel_max);
  s.dz.accel_max = dz.number("accel_max_ms2", s.dz.accel_max);
  s.dz.beta_cap = dz.number("beta_cap_per_s", s.dz.beta_cap);
  dz.finish();

  SectionReader cost(file, "cost", origin);
  s.cost.detour_distance = cost.required_number("detour_distance_m");
  s.cost.detour_speed = kmh_to_ms(cost.required_number("detour_speed_kmh"));
  s.cost.failure_rate_coeff =
      cost.number("failure_rate_coeff_per_m", s.cost.failure_rate_coeff);
  cost.finish();

  SectionReader ga(file, "ga", origin);
  s.ga.comfort_decel = ga.number("comfort_decel_ms2", s.ga.comfort_decel);
  if (const auto rule = ga.take("target_speed_rule")) {
    if (*rule == "adjacent_gap_speed") {
      s.ga.target_rule = GaTargetRule::AdjacentGapSpeed;
    } else if (*rule == "hdv_desired_mean") {
      s.ga.target_rule = GaTargetRule::HdvDesiredMean;
    } else {
      fail(origin, "[ga] target_speed_rule: expected adjacent_gap_speed or "
                   "hdv_desired_mean, got '" + *rule + "'");
    }
  }
  s.ga.require_lag_gap = ga.boolean("require_lag_gap", s.ga.require_lag_gap);
  ga.finish();

  SectionReader newell(file, "newell", origin);
  s.newell.wave_speed = newell.number("wave_speed_ms", s.newell.wave_speed);
  s.newell.jam_spacing = newell.number("jam_spacing_m", s.newell.jam_spacing);
  newell.finish();

  const bool has_generation = file.sections.count("generation") != 0;
  const bool has_vehicles = file.sections.count("vehicles") != 0;
  if (has_generation && has_vehicles) {
    fail(origin, "[generation] and [vehicles] are mutually exclusive");
  }
  if (!has_generation && !has_vehicles) {
    fail(origin, "one of [generation] or [vehicles] is mandatory");
  }
  if (has_generation) {
    GenerationTemplate g;
    SectionReader gen(file, "generation", origin);
    g.cav_count = gen.integer("cav_count", g.cav_count);
    g.hdv_count = gen.integer("hdv_count", g.hdv_count);
    g.cav_speed = gen.speed_kmh("cav_speed_kmh", g.cav_speed);
    g.hdv_speed_min = gen.speed_kmh("hdv_speed_min_kmh", g.hdv_speed_min);
    g.hdv_speed_max = gen.speed_kmh("hdv_speed_max_kmh", g.hdv_speed_max);
    g.hdv_desired_min = gen.speed_kmh("hdv_desired_min_kmh", g.hdv_desired_min);
    g.hdv_desired_max = gen.speed_kmh("hdv_desired_max_kmh", g.hdv_desired_max);
    g.cav_lead_x = gen.number("cav_lead_position_m", g.cav_lead_x);
    g.hdv_lead_x = gen.number("hdv_lead_position_m", g.hdv_lead_x);
    g.cav_extra_spacing_max =
        gen.number("cav_extra_spacing_max_m", g.cav_extra_spacing_max);
    g.hdv_platoon_size = gen.integer("hdv_platoon_size", g.hdv_platoon_size);
    g.hdv_platoon_extra_max =
        gen.number("hdv_platoon_extra_max_m", g.hdv_platoon_extra_max);
    g.hdv_band_extra_min = gen.number("hdv_band_extra_min_m", g.hdv_band_extra_min);
    g.hdv_band_extra_max = gen.number("hdv_band_extra_max_m", g.hdv_band_extra_max);
    gen.finish();
    s.generation = g;
  } else {
    for (const IniEntry& e : file.sections.at("vehicles")) {
      if (e.key != "vehicle") {
        fail(origin, "[vehicles] " + e.key + ": unknown key (expected 'vehicle')");
      }
      s.vehicles.push_back(parse_vehicle_line(origin, e.value));
    }
  }

  validate_scenario(s);
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  return parse_scenario_text(read_file(path), path.string());
}

std::string trajectories_to_csv(const SimulationLog& log) {
  // Events carry the vehicle's frame position, so inlining them on the frame
  // row loses nothing.
  std::map<std::pair<double, int>, EventKind> by_frame;
  for (const Event& e : log.events) by_frame.emplace(std::make_pair(e.t, e.vehicle_id), e.kind);
  std::string out = "t_s,vehicle_id,lane,x_m,v_kmh,event\n";
  for (const Frame& f : log.frames) {
    out += format_double(f.t);
    out += ',';
    out += std::to_string(f.vehicle_id);
    out += ',';
    out += lane_name(f.lane);
    out += ',';
    out += format_double(f.x);
    out += ',';
    out += format_double(f.v_kmh);
    out += ',';
    if (auto it = by_frame.find({f.t, f.vehicle_id}); it != by_frame.end()) {
      out += event_name(it->second);
    }
    out += '\n';
  }
  return out;
}

SimulationLog trajectories_from_csv(std::string_view csv) {
  SimulationLog log;
  const auto lines = split(csv, '\n');
  if (lines.empty() || trim(lines[0]) != "t_s,vehicle_id,lane,x_m,v_kmh,event") {
    throw std::invalid_argument("trajectory csv: missing or unexpected header");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw std::invalid_argument("trajectory csv: line " + std::to_string(i + 1) +
                                  ": expected 6 fields");
    }
    Frame f;
    f.t = parse_double("trajectory csv", "t_s", fields[0]);
    f.vehicle_id = static_cast<int>(parse_double("trajectory csv", "vehicle_id", fields[1]));
    if (fields[2] == "cav") {
      f.lane = Lane::DedicatedCav;
    } else if (fields[2] == "hdv") {
      f.lane = Lane::Hdv;
    } else {
      throw std::invalid_argument("trajectory csv: unknown lane '" + fields[2] + "'");
    }
    f.x = parse_double("trajectory csv", "x_m", fields[3]);
    f.v_kmh = parse_double("trajectory csv", "v_kmh", fields[4]);
    log.frames.push_back(f);
    if (!fields[5].empty()) {
      EventKind kind;
      if (fields[5] == "MergeExecuted") {
        kind = EventKind::MergeExecuted;
      } else if (fields[5] == "DetourExit") {
        kind = EventKind::DetourExit;
      } else if (fields[5] == "PlanInfeasible") {
        kind = EventKind::PlanInfeasible;
      } else {
        throw std::invalid_argument("trajectory csv: unknown event '" + fields[5] + "'");
      }
      log.events.push_back({f.t, f.vehicle_id, kind, f.x});
    }
  }
  return log;
}

std::string speeds_to_csv(const SimulationLog& log) {
  std::string out = "t_s,vehicle_id,v_kmh\n";
  for (const Frame& f : log.frames) {
    if (f.lane != Lane::DedicatedCav) continue;
    out += format_double(f.t);
    out += ',';
    out += std::to_string(f.vehicle_id);
    out += ',';
    out += format_double(f.v_kmh);
    out += '\n';
  }
  return out;
}

std::string metrics_to_json(const Metrics& metrics, const TimingSummary& timing,
                            PlannerKind planner, std::uint64_t seed) {
  json doc = {{"schema_version", 1},
              {"planner", planner_name(planner)},
              {"seed", seed},
              {"metrics", metrics_to_json_obj(metrics)},
              {"decision_timing", to_json(timing)}};
  return doc.dump(2) + "\n";
}

std::string batch_summary_to_csv(std::span<const BatchRow> rows) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  // No wall-clock columns: summaries are deterministic given the seed list.
  // Per-decision timing lives in the per-run metrics documents.
  std::string out =
      "seed,planner,merged_count,detour_count,mean_merge_position_m,"
      "mean_merge_time_s,avg_dz_speed_kmh,avg_dz_speed_all_lanes_kmh,"
      "avg_hdv_speed_kmh,decision_count\n";
  for (const BatchRow& row : rows) {
    out += std::to_string(row.seed);
    out += ',';
    out += planner_name(row.planner);
    out += ',';
    out += std::to_string(row.metrics.merged_count);
    out += ',';
    out += std::to_string(row.metrics.detour_count);
    out += ',';
    out += opt(row.metrics.mean_merge_position);
    out += ',';
    out += opt(row.metrics.mean_merge_time);
    out += ',';
    out += opt(row.metrics.avg_dz_speed_kmh);
    out += ',';
    out += opt(row.metrics.avg_dz_speed_all_lanes_kmh);
    out += ',';
    out += opt(row.metrics.avg_hdv_speed_kmh);
    out += ',';
    out += std::to_string(row.timing.count);
    out += '\n';
  }
  return out;
}

std::string comparison_to_json(const BatchRow& pso, const BatchRow& ga) {
  auto delta = [](const std::optional<double>& a, const std::optional<double>& b) {
    return a && b ? json(*a - *b) : json(nullptr);
  };
  json doc = {
      {"schema_version", 1},
      {"seed", pso.seed},
      {"pso",
       {{"metrics", metrics_to_json_obj(pso.metrics)},
        {"decision_timing", to_json(pso.timing)}}},
      {"ga",
       {{"metrics", metrics_to_json_obj(ga.metrics)},
        {"decision_timing", to_json(ga.timing)}}},
      {"pso_minus_ga",
       {{"mean_merge_position_m",
         delta(pso.metrics.mean_merge_position, ga.metrics.mean_merge_position)},
        {"mean_merge_time_s",
         delta(pso.metrics.mean_merge_time, ga.metrics.mean_merge_time)},
        {"avg_dz_speed_kmh",
         delta(pso.metrics.avg_dz_speed_kmh, ga.metrics.avg_dz_speed_kmh)}}}};
  return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("failed to move " + tmp.string() + " into place");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

SimulationLog load_trajectories(const std::filesystem::path& path) {
  return trajectories_from_csv(read_file(path));
}

}  // namespace mlc
