#pragma once

#include <span>
#include <string>
#include <vector>

#include "hybridloc/geo.hpp"
#include "hybridloc/planar.hpp"
#include "hybridloc/rng.hpp"

namespace hybridloc::radio {

using geo::MapPoint;

struct AccessPoint {
  std::string id;
  MapPoint position;
  double p0_dbm = -40.0;  ///< received power at d0_m
  double d0_m = 1.0;
  double n = 2.0;         ///< path-loss exponent
  double sigma_db = 0.0;  ///< log-normal shadowing stddev

  void validate() const;
};

struct Wall {
  MapPoint p1;
  MapPoint p2;
  double waf_db = 0.0;  ///< attenuation per crossing

  void validate() const;
};

struct RadioEnvironment {
  std::vector<AccessPoint> aps;  ///< kept sorted by id after validate()
  std::vector<Wall> walls;
  std::vector<planar::Polygon> indoor_regions;  ///< GPS-denied zones
  double body_attenuation_db = 5.0;

  /// Checks every invariant and sorts `aps` by id. Throws ConsistencyError
  /// or GeometryError.
  void validate();

  const AccessPoint* find_ap(const std::string& id) const;
  bool is_indoor(const MapPoint& p) const;
};

struct WallCrossings {
  int count = 0;
  double total_waf_db = 0.0;
};

/// Walls whose segment properly crosses the open segment from-to.
WallCrossings count_walls(const MapPoint& from, const MapPoint& to,
                          std::span<const Wall> walls);

/// Log-distance path loss with per-wall attenuation:
///   P0 - 10 n log10(d / d0) - sum(WAF) + X
/// with d clamped to at least d0. X is sigma_db times a standard normal drawn
/// from `shadowing` when one is supplied (one draw per call, even when
/// sigma_db is zero), otherwise 0.
double predict_rssi(const AccessPoint& ap, const MapPoint& receiver,
                    std::span<const Wall> walls, Rng* shadowing = nullptr);

/// Distance at which the noiseless model yields `rssi_dbm`:
///   d0 * 10^((P0 - rssi - waf) / (10 n))
double invert_distance(double rssi_dbm, const AccessPoint& ap,
                       double total_waf_db);

/// Environment JSON, see README for the schema.
RadioEnvironment parse_environment(std::string_view json_text,
                                   const std::string& source = {});
RadioEnvironment load_environment(const std::string& path);

}  // namespace hybridloc::radio
