#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridloc/geo.hpp"
#include "hybridloc/radio.hpp"
#include "hybridloc/radiomap.hpp"
#include "hybridloc/switcher.hpp"

namespace hybridloc::sim {

using geo::MapPoint;

inline constexpr std::string_view kTrajectoryHeader = "epoch_ms,x_m,y_m,orientation_deg";
inline constexpr std::string_view kTruthHeader = "epoch_ms,x_m,y_m";
inline constexpr std::string_view kGridHeader = "location_id,x_m,y_m";

/// Orientation is the user's facing direction in degrees counter-clockwise
/// from the map +x axis.
struct Waypoint {
  long long epoch_ms = 0;
  MapPoint position;
  double orientation_deg = 0.0;
};

struct Pose {
  MapPoint position;
  double orientation_deg = 0.0;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;

  /// Non-empty, strictly increasing epochs, orientations in [0, 360).
  void validate() const;

  /// Position is linear between the bracketing waypoints; orientation is
  /// held from the earlier waypoint. Epochs outside the span clamp to the
  /// ends.
  Pose at(long long epoch_ms) const;
};

struct SimConfig {
  std::uint64_t seed = 0;
  long long epoch_period_ms = 1000;
  double gps_noise_m = 0.0;  ///< stddev per planar axis
  double rssi_floor_dbm = -120.0;
  double rssi_ceiling_dbm = 0.0;

  void validate() const;
};

struct SimulatedTrace {
  std::vector<switcher::SensorEpoch> trace;
  std::vector<geo::TimedPoint> truth;
};

/// Attenuation applied when the AP is behind the user: `body_attenuation_db`
/// if the angle between the facing direction and the bearing to the AP is
/// strictly greater than 90 degrees, else 0. Coincident positions give 0.
double body_attenuation(double user_orientation_deg, const MapPoint& user_pos,
                        const MapPoint& ap_pos, double body_attenuation_db);

/// One simulated RSSI reading: shadowed path loss, minus body blockage,
/// clamped to the configured floor/ceiling. Consumes one Gaussian from `rng`.
double sample_rssi(const radio::RadioEnvironment& env, const radio::AccessPoint& ap,
                   const Pose& user, const SimConfig& cfg, Rng& rng);

/// Generates one epoch every `epoch_period_ms` from the first to the last
/// waypoint.
///
/// Stream order per epoch: two GPS noise Gaussians (x then y), then one
/// shadowing Gaussian per AP in id order. The GPS reading is always present;
/// it is valid only outside every indoor region, and its coordinates are the
/// noisy map position converted through `georef`. Every AP contributes one
/// WLAN reading.
SimulatedTrace generate_trace(const radio::RadioEnvironment& env,
                              const Trajectory& trajectory,
                              const geo::ReferencePair& georef,
                              const SimConfig& cfg);

struct SurveyPoint {
  std::string location_id;
  MapPoint position;
};

/// Offline survey: for each point (in order), each orientation, each sample
/// index and each AP in id order, one stochastic reading.
std::vector<radiomap::RssiSample> survey(
    const radio::RadioEnvironment& env, std::span<const SurveyPoint> grid,
    int samples_per_point, const SimConfig& cfg,
    std::span<const int> orientations = radiomap::kOrientations);

/// Regular grid of survey points covering [x0, x1] x [y0, y1] with `spacing`.
/// Ids are `P<row>_<col>`.
std::vector<SurveyPoint> make_grid(double x0, double y0, double x1, double y1,
                                   double spacing);

Trajectory read_trajectory(std::istream& in, const std::string& source = {});
Trajectory read_trajectory(const std::string& path);

std::vector<SurveyPoint> read_grid(std::istream& in, const std::string& source = {});
std::vector<SurveyPoint> read_grid(const std::string& path);

void write_truth(std::ostream& out, std::span<const geo::TimedPoint> truth);
std::vector<geo::TimedPoint> read_truth(std::istream& in, const std::string& source = {});
std::vector<geo::TimedPoint> read_truth(const std::string& path);

}  // namespace hybridloc::sim
