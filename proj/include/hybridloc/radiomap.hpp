#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hybridloc/geo.hpp"

namespace hybridloc::radiomap {

using geo::MapPoint;

inline constexpr std::array<int, 4> kOrientations{0, 90, 180, 270};

inline constexpr std::string_view kCsvHeader =
    "location_id,x_m,y_m,orientation_deg,ap_id,mean_dbm,stddev_db,sample_count";

bool is_survey_orientation(int degrees);

/// One offline-phase reading.
struct RssiSample {
  std::string location_id;
  MapPoint position;
  int orientation_deg = 0;
  std::string ap_id;
  double rssi_dbm = 0.0;
};

struct ApStats {
  double mean_dbm = 0.0;
  double stddev_db = 0.0;  ///< population stddev
  std::size_t sample_count = 0;

  friend bool operator==(const ApStats&, const ApStats&) = default;
};

/// Recorded signal statistics at one surveyed location and user heading.
struct Fingerprint {
  std::string location_id;
  MapPoint position;
  int orientation_deg = 0;
  std::map<std::string, ApStats> aps;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Immutable fingerprint table, ordered by (location_id, orientation_deg).
class RadioMap {
 public:
  RadioMap() = default;

  /// Validates and orders the fingerprints. Throws ConsistencyError on an
  /// empty set, duplicate keys, a location reported at two positions, or
  /// out-of-range statistics.
  explicit RadioMap(std::vector<Fingerprint> fingerprints);

  const std::vector<Fingerprint>& fingerprints() const { return fingerprints_; }
  const std::set<std::string>& ap_ids() const { return ap_ids_; }
  bool empty() const { return fingerprints_.empty(); }
  std::size_t size() const { return fingerprints_.size(); }

  const Fingerprint* find(const std::string& location_id, int orientation_deg) const;

  friend bool operator==(const RadioMap&, const RadioMap&) = default;

 private:
  std::vector<Fingerprint> fingerprints_;
  std::set<std::string> ap_ids_;
};

/// Groups samples by (location, orientation, AP) and reduces each group to
/// mean, population stddev and count. The result does not depend on sample
/// order.
RadioMap build_radio_map(std::span<const RssiSample> samples);

void save_radio_map(const RadioMap& map, std::ostream& out);
void save_radio_map(const RadioMap& map, const std::string& path);

RadioMap load_radio_map(std::istream& in, const std::string& source = {});
RadioMap load_radio_map(const std::string& path);

}  // namespace hybridloc::radiomap
