#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hybridloc/planar.hpp"
#include "hybridloc/radiomap.hpp"

namespace hybridloc::matcher {

using geo::MapPoint;
using planar::euclidean;

inline constexpr double kDefaultFloorDbm = -100.0;

/// Online-phase observation: AP id to RSSI (dBm).
struct RssiScan {
  long long epoch_ms = 0;
  std::map<std::string, double> readings;

  /// At least one reading, every value in [-120, 0]. Throws ConsistencyError.
  void validate() const;

  friend bool operator==(const RssiScan&, const RssiScan&) = default;
};

struct Candidate {
  std::string location_id;
  int orientation_deg = 0;
  double signal_distance = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct MatchResult {
  MapPoint position;
  std::vector<Candidate> contributing;  ///< ascending signal distance
  std::size_t k_used = 0;
};

/// Euclidean norm over `ap_universe` of (observed - recorded mean), where an
/// AP missing on either side reads as `floor_dbm`.
double signal_distance(const RssiScan& scan, const radiomap::Fingerprint& fp,
                       const std::set<std::string>& ap_universe,
                       double floor_dbm = kDefaultFloorDbm);

/// Ranks every (location, orientation) fingerprint by signal distance over the
/// map's AP set and returns the unweighted centroid of the k closest. Ties
/// are broken by (location_id, orientation_deg); k is clamped to the map
/// size. Readings from APs the map has never seen are ignored.
MatchResult knn_locate(const RssiScan& scan, const radiomap::RadioMap& map,
                       std::size_t k = 1, double floor_dbm = kDefaultFloorDbm);

}  // namespace hybridloc::matcher
