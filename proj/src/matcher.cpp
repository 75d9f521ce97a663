#include "hybridloc/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "hybridloc/error.hpp"

namespace hybridloc::matcher {

void RssiScan::validate() const {
  if (readings.empty()) throw ConsistencyError("scan has no readings");
  for (const auto& [ap_id, rssi] : readings) {
    if (!(rssi >= -120.0 && rssi <= 0.0)) {
      throw ConsistencyError("scan reading for '" + ap_id +
                             "' outside [-120, 0] dBm");
    }
  }
}

double signal_distance(const RssiScan& scan, const radiomap::Fingerprint& fp,
                       const std::set<std::string>& ap_universe,
                       double floor_dbm) {
  double sum = 0.0;
  for (const auto& ap_id : ap_universe) {
    auto obs = scan.readings.find(ap_id);
    auto rec = fp.aps.find(ap_id);
    const double observed = obs != scan.readings.end() ? obs->second : floor_dbm;
    const double recorded = rec != fp.aps.end() ? rec->second.mean_dbm : floor_dbm;
    const double diff = observed - recorded;
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

MatchResult knn_locate(const RssiScan& scan, const radiomap::RadioMap& map,
                       std::size_t k, double floor_dbm) {
  if (map.empty()) throw ConsistencyError("cannot match against an empty radio map");
  if (k < 1) throw ConsistencyError("k must be >= 1");

  std::vector<Candidate> ranked;
  ranked.reserve(map.size());
  for (const auto& fp : map.fingerprints()) {
    ranked.push_back({fp.location_id, fp.orientation_deg,
                      signal_distance(scan, fp, map.ap_ids(), floor_dbm)});
  }

  const std::size_t k_used = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k_used),
                    ranked.end(), [](const Candidate& a, const Candidate& b) {
                      return std::tie(a.signal_distance, a.location_id, a.orientation_deg) <
                             std::tie(b.signal_distance, b.location_id, b.orientation_deg);
                    });
  ranked.resize(k_used);

  MatchResult result;
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& c : ranked) {
    const auto* fp = map.find(c.location_id, c.orientation_deg);
    sx += fp->position.x;
    sy += fp->position.y;
  }
  result.position = {sx / static_cast<double>(k_used), sy / static_cast<double>(k_used)};
  result.contributing = std::move(ranked);
  result.k_used = k_used;
  return result;
}

}  // namespace hybridloc::matcher
