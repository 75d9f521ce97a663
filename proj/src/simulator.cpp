#include "hybridloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "hybridloc/csv.hpp"
#include "hybridloc/error.hpp"

namespace hybridloc::sim {

namespace {

// Exact unit vectors for the cardinal headings so that the 90 degree
// boundary of the body-blockage rule is decided without rounding error.
MapPoint facing_vector(double orientation_deg) {
  double deg = std::fmod(orientation_deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  if (deg == 0.0) return {1.0, 0.0};
  if (deg == 90.0) return {0.0, 1.0};
  if (deg == 180.0) return {-1.0, 0.0};
  if (deg == 270.0) return {0.0, -1.0};
  const double rad = deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

std::vector<const radio::AccessPoint*> aps_by_id(const radio::RadioEnvironment& env) {
  std::vector<const radio::AccessPoint*> out;
  out.reserve(env.aps.size());
  for (const auto& ap : env.aps) out.push_back(&ap);
  std::sort(out.begin(), out.end(),
            [](const auto* a, const auto* b) { return a->id < b->id; });
  return out;
}

}  // namespace

void Trajectory::validate() const {
  if (waypoints.empty()) throw ConsistencyError("trajectory has no waypoints");
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const auto& w = waypoints[i];
    if (!(w.orientation_deg >= 0.0 && w.orientation_deg < 360.0)) {
      throw ConsistencyError("waypoint " + std::to_string(i) +
                             ": orientation must be in [0, 360)");
    }
    if (i > 0 && w.epoch_ms <= waypoints[i - 1].epoch_ms) {
      throw ConsistencyError("waypoint " + std::to_string(i) +
                             ": epochs must be strictly increasing");
    }
  }
}

Pose Trajectory::at(long long epoch_ms) const {
  if (epoch_ms <= waypoints.front().epoch_ms) {
    return {waypoints.front().position, waypoints.front().orientation_deg};
  }
  if (epoch_ms >= waypoints.back().epoch_ms) {
    return {waypoints.back().position, waypoints.back().orientation_deg};
  }
  auto next = std::upper_bound(
      waypoints.begin(), waypoints.end(), epoch_ms,
      [](long long t, const Waypoint& w) { return t < w.epoch_ms; });
  const Waypoint& b = *next;
  const Waypoint& a = *(next - 1);
  const double t = static_cast<double>(epoch_ms - a.epoch_ms) /
                   static_cast<double>(b.epoch_ms - a.epoch_ms);
  return {{a.position.x + t * (b.position.x - a.position.x),
           a.position.y + t * (b.position.y - a.position.y)},
          a.orientation_deg};
}

void SimConfig::validate() const {
  if (epoch_period_ms <= 0) throw ConsistencyError("epoch period must be > 0 ms");
  if (!(gps_noise_m >= 0.0) || !std::isfinite(gps_noise_m)) {
    throw ConsistencyError("gps noise must be >= 0 m");
  }
  if (!(rssi_floor_dbm <= rssi_ceiling_dbm)) {
    throw ConsistencyError("rssi floor must not exceed the ceiling");
  }
}

double body_attenuation(double user_orientation_deg, const MapPoint& user_pos,
                        const MapPoint& ap_pos, double body_attenuation_db) {
  if (user_pos == ap_pos) return 0.0;
  const MapPoint facing = facing_vector(user_orientation_deg);
  const double dot = facing.x * (ap_pos.x - user_pos.x) + facing.y * (ap_pos.y - user_pos.y);
  return dot < 0.0 ? body_attenuation_db : 0.0;
}

double sample_rssi(const radio::RadioEnvironment& env, const radio::AccessPoint& ap,
                   const Pose& user, const SimConfig& cfg, Rng& rng) {
  double rssi = radio::predict_rssi(ap, user.position, env.walls, &rng);
  rssi -= body_attenuation(user.orientation_deg, user.position, ap.position,
                           env.body_attenuation_db);
  return std::clamp(rssi, cfg.rssi_floor_dbm, cfg.rssi_ceiling_dbm);
}

SimulatedTrace generate_trace(const radio::RadioEnvironment& env,
                              const Trajectory& trajectory,
                              const geo::ReferencePair& georef,
                              const SimConfig& cfg) {
  trajectory.validate();
  cfg.validate();
  const auto aps = aps_by_id(env);
  Rng rng(cfg.seed);

  SimulatedTrace out;
  const long long first = trajectory.waypoints.front().epoch_ms;
  const long long last = trajectory.waypoints.back().epoch_ms;
  for (long long t = first; t <= last; t += cfg.epoch_period_ms) {
    const Pose pose = trajectory.at(t);

    const double noise_x = cfg.gps_noise_m * rng.gaussian();
    const double noise_y = cfg.gps_noise_m * rng.gaussian();
    const MapPoint measured{pose.position.x + noise_x, pose.position.y + noise_y};

    switcher::SensorEpoch epoch;
    epoch.epoch_ms = t;
    epoch.gps = switcher::GpsReading{geo::map_to_geo(measured, georef),
                                     !env.is_indoor(pose.position)};
    matcher::RssiScan scan{t, {}};
    for (const auto* ap : aps) {
      scan.readings[ap->id] = sample_rssi(env, *ap, pose, cfg, rng);
    }
    if (!scan.readings.empty()) epoch.wlan = std::move(scan);

    out.trace.push_back(std::move(epoch));
    out.truth.push_back({t, pose.position});
  }
  return out;
}

std::vector<radiomap::RssiSample> survey(const radio::RadioEnvironment& env,
                                         std::span<const SurveyPoint> grid,
                                         int samples_per_point, const SimConfig& cfg,
                                         std::span<const int> orientations) {
  if (grid.empty()) throw ConsistencyError("survey grid is empty");
  if (samples_per_point < 1) throw ConsistencyError("samples per point must be >= 1");
  cfg.validate();
  const auto aps = aps_by_id(env);
  Rng rng(cfg.seed);

  std::vector<radiomap::RssiSample> samples;
  samples.reserve(grid.size() * orientations.size() *
                  static_cast<std::size_t>(samples_per_point) * aps.size());
  for (const auto& point : grid) {
    for (int orientation : orientations) {
      const Pose pose{point.position, static_cast<double>(orientation)};
      for (int s = 0; s < samples_per_point; ++s) {
        for (const auto* ap : aps) {
          samples.push_back({point.location_id, point.position, orientation, ap->id,
                             sample_rssi(env, *ap, pose, cfg, rng)});
        }
      }
    }
  }
  return samples;
}

std::vector<SurveyPoint> make_grid(double x0, double y0, double x1, double y1,
                                   double spacing) {
  if (!(spacing > 0.0) || x1 < x0 || y1 < y0) {
    throw ConsistencyError("grid needs spacing > 0 and x0 <= x1, y0 <= y1");
  }
  const auto cols = static_cast<int>(std::floor((x1 - x0) / spacing + 1e-9)) + 1;
  const auto rows = static_cast<int>(std::floor((y1 - y0) / spacing + 1e-9)) + 1;
  std::vector<SurveyPoint> grid;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      grid.push_back({"P" + std::to_string(r) + "_" + std::to_string(c),
                      {x0 + c * spacing, y0 + r * spacing}});
    }
  }
  return grid;
}

Trajectory read_trajectory(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kTrajectoryHeader);
  Trajectory trajectory;
  while (reader.next()) {
    reader.expect_fields(4);
    Waypoint w;
    w.epoch_ms = reader.integer(0, "epoch_ms");
    w.position = {reader.number(1, "x_m"), reader.number(2, "y_m")};
    w.orientation_deg = reader.number(3, "orientation_deg");
    if (!(w.orientation_deg >= 0.0 && w.orientation_deg < 360.0)) {
      reader.fail("orientation_deg must be in [0, 360)");
    }
    if (!trajectory.waypoints.empty() &&
        w.epoch_ms <= trajectory.waypoints.back().epoch_ms) {
      reader.fail("epoch_ms must be strictly increasing");
    }
    trajectory.waypoints.push_back(w);
  }
  if (trajectory.waypoints.empty()) throw ParseError("trajectory has no waypoints", source);
  return trajectory;
}

Trajectory read_trajectory(const std::string& path) {
  auto in = csv::open_input(path);
  return read_trajectory(in, path);
}

std::vector<SurveyPoint> read_grid(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kGridHeader);
  std::vector<SurveyPoint> grid;
  std::set<std::string> seen;
  while (reader.next()) {
    reader.expect_fields(3);
    SurveyPoint p{reader.text(0, "location_id"),
                  {reader.number(1, "x_m"), reader.number(2, "y_m")}};
    if (!seen.insert(p.location_id).second) {
      reader.fail("duplicate location_id '" + p.location_id + "'");
    }
    grid.push_back(std::move(p));
  }
  if (grid.empty()) throw ParseError("survey grid has no points", source);
  return grid;
}

std::vector<SurveyPoint> read_grid(const std::string& path) {
  auto in = csv::open_input(path);
  return read_grid(in, path);
}

void write_truth(std::ostream& out, std::span<const geo::TimedPoint> truth) {
  out << kTruthHeader << '\n';
  for (const auto& p : truth) {
    out << p.epoch_ms << ',' << csv::format_double(p.position.x) << ','
        << csv::format_double(p.position.y) << '\n';
  }
}

std::vector<geo::TimedPoint> read_truth(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kTruthHeader);
  std::vector<geo::TimedPoint> truth;
  std::set<long long> seen;
  while (reader.next()) {
    reader.expect_fields(3);
    geo::TimedPoint p{reader.integer(0, "epoch_ms"),
                      {reader.number(1, "x_m"), reader.number(2, "y_m")}};
    if (!seen.insert(p.epoch_ms).second) {
      reader.fail("duplicate epoch_ms " + std::to_string(p.epoch_ms));
    }
    truth.push_back(p);
  }
  return truth;
}

std::vector<geo::TimedPoint> read_truth(const std::string& path) {
  auto in = csv::open_input(path);
  return read_truth(in, path);
}

}  // namespace hybridloc::sim
