#include "hybridloc/radiomap.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "hybridloc/csv.hpp"
#include "hybridloc/error.hpp"

namespace hybridloc::radiomap {

namespace {

std::string key_name(const std::string& location_id, int orientation_deg) {
  return "(" + location_id + ", " + std::to_string(orientation_deg) + ")";
}

void check_stats(const Fingerprint& fp) {
  if (fp.aps.empty()) {
    throw ConsistencyError("fingerprint " +
                           key_name(fp.location_id, fp.orientation_deg) +
                           " has no access points");
  }
  for (const auto& [ap_id, stats] : fp.aps) {
    const std::string where = "fingerprint " +
                              key_name(fp.location_id, fp.orientation_deg) +
                              " AP '" + ap_id + "': ";
    if (ap_id.empty()) throw ConsistencyError(where + "empty AP id");
    if (stats.sample_count < 1) throw ConsistencyError(where + "sample_count < 1");
    if (!(stats.stddev_db >= 0.0) || !std::isfinite(stats.stddev_db)) {
      throw ConsistencyError(where + "stddev_db must be >= 0");
    }
    if (!(stats.mean_dbm >= -120.0 && stats.mean_dbm <= 0.0)) {
      throw ConsistencyError(where + "mean_dbm must be in [-120, 0]");
    }
  }
}

}  // namespace

bool is_survey_orientation(int degrees) {
  return std::find(kOrientations.begin(), kOrientations.end(), degrees) !=
         kOrientations.end();
}

RadioMap::RadioMap(std::vector<Fingerprint> fingerprints)
    : fingerprints_(std::move(fingerprints)) {
  if (fingerprints_.empty()) throw ConsistencyError("radio map has no fingerprints");
  std::sort(fingerprints_.begin(), fingerprints_.end(),
            [](const Fingerprint& a, const Fingerprint& b) {
              return std::tie(a.location_id, a.orientation_deg) <
                     std::tie(b.location_id, b.orientation_deg);
            });
  std::map<std::string, MapPoint> positions;
  for (std::size_t i = 0; i < fingerprints_.size(); ++i) {
    const auto& fp = fingerprints_[i];
    if (fp.location_id.empty()) throw ConsistencyError("empty location_id");
    if (!is_survey_orientation(fp.orientation_deg)) {
      throw ConsistencyError("fingerprint " +
                             key_name(fp.location_id, fp.orientation_deg) +
                             ": orientation must be 0, 90, 180 or 270");
    }
    if (i > 0 && fingerprints_[i - 1].location_id == fp.location_id &&
        fingerprints_[i - 1].orientation_deg == fp.orientation_deg) {
      throw ConsistencyError("duplicate fingerprint " +
                             key_name(fp.location_id, fp.orientation_deg));
    }
    auto [it, inserted] = positions.emplace(fp.location_id, fp.position);
    if (!inserted && !(it->second == fp.position)) {
      throw ConsistencyError("location '" + fp.location_id +
                             "' reported at two different positions");
    }
    check_stats(fp);
    for (const auto& entry : fp.aps) ap_ids_.insert(entry.first);
  }
}

const Fingerprint* RadioMap::find(const std::string& location_id,
                                  int orientation_deg) const {
  auto it = std::lower_bound(
      fingerprints_.begin(), fingerprints_.end(),
      std::tie(location_id, orientation_deg),
      [](const Fingerprint& fp, const std::tuple<const std::string&, const int&>& key) {
        return std::tie(fp.location_id, fp.orientation_deg) < key;
      });
  if (it == fingerprints_.end() || it->location_id != location_id ||
      it->orientation_deg != orientation_deg) {
    return nullptr;
  }
  return &*it;
}

RadioMap build_radio_map(std::span<const RssiSample> samples) {
  if (samples.empty()) throw ConsistencyError("no samples to build a radio map from");

  using Key = std::tuple<std::string, int>;
  std::map<Key, std::map<std::string, std::vector<double>>> groups;
  std::map<std::string, MapPoint> positions;

  for (const auto& s : samples) {
    if (!is_survey_orientation(s.orientation_deg)) {
      throw ConsistencyError("sample at '" + s.location_id +
                             "': orientation must be 0, 90, 180 or 270");
    }
    if (!(s.rssi_dbm >= -120.0 && s.rssi_dbm <= 0.0)) {
      throw ConsistencyError("sample at '" + s.location_id +
                             "': rssi_dbm must be in [-120, 0]");
    }
    auto [it, inserted] = positions.emplace(s.location_id, s.position);
    if (!inserted && !(it->second == s.position)) {
      throw ConsistencyError("location '" + s.location_id +
                             "' surveyed at two different positions");
    }
    groups[{s.location_id, s.orientation_deg}][s.ap_id].push_back(s.rssi_dbm);
  }

  std::vector<Fingerprint> fingerprints;
  fingerprints.reserve(groups.size());
  for (auto& [key, per_ap] : groups) {
    Fingerprint fp;
    fp.location_id = std::get<0>(key);
    fp.orientation_deg = std::get<1>(key);
    fp.position = positions.at(fp.location_id);
    for (auto& [ap_id, values] : per_ap) {
      // Sorted summation makes the result independent of input order.
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      const double count = static_cast<double>(values.size());
      double mean = sum / count;
      // Rounding can push the mean of identical values off by an ulp.
      mean = std::clamp(mean, values.front(), values.back());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      const double stddev = values.front() == values.back() ? 0.0 : std::sqrt(ss / count);
      fp.aps[ap_id] = {mean, stddev, values.size()};
    }
    fingerprints.push_back(std::move(fp));
  }
  return RadioMap(std::move(fingerprints));
}

void save_radio_map(const RadioMap& map, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& fp : map.fingerprints()) {
    for (const auto& [ap_id, stats] : fp.aps) {
      out << fp.location_id << ',' << csv::format_double(fp.position.x) << ','
          << csv::format_double(fp.position.y) << ',' << fp.orientation_deg << ','
          << ap_id << ',' << csv::format_double(stats.mean_dbm) << ','
          << csv::format_double(stats.stddev_db) << ',' << stats.sample_count
          << '\n';
    }
  }
}

void save_radio_map(const RadioMap& map, const std::string& path) {
  auto out = csv::open_output(path);
  save_radio_map(map, out);
  if (!out) throw ParseError("write failed", path);
}

RadioMap load_radio_map(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  reader.expect_header(kCsvHeader);

  using Key = std::tuple<std::string, int>;
  std::map<Key, Fingerprint> fingerprints;
  std::map<std::string, MapPoint> positions;

  while (reader.next()) {
    reader.expect_fields(8);
    std::string location_id = reader.text(0, "location_id");
    MapPoint position{reader.number(1, "x_m"), reader.number(2, "y_m")};
    long long orientation = reader.integer(3, "orientation_deg");
    std::string ap_id = reader.text(4, "ap_id");
    ApStats stats;
    stats.mean_dbm = reader.number(5, "mean_dbm");
    stats.stddev_db = reader.number(6, "stddev_db");
    long long count = reader.integer(7, "sample_count");

    if (!is_survey_orientation(static_cast<int>(orientation)) ||
        orientation != static_cast<int>(orientation)) {
      reader.fail("orientation_deg must be 0, 90, 180 or 270");
    }
    if (count < 1) reader.fail("sample_count must be >= 1");
    if (stats.stddev_db < 0.0) reader.fail("stddev_db must be >= 0");
    if (stats.mean_dbm < -120.0 || stats.mean_dbm > 0.0) {
      reader.fail("mean_dbm must be in [-120, 0]");
    }
    stats.sample_count = static_cast<std::size_t>(count);

    auto [pos_it, first_seen] = positions.emplace(location_id, position);
    if (!first_seen && !(pos_it->second == position)) {
      reader.fail("location '" + location_id + "' has conflicting positions");
    }

    Key key{location_id, static_cast<int>(orientation)};
    auto& fp = fingerprints[key];
    if (fp.location_id.empty()) {
      fp.location_id = location_id;
      fp.position = position;
      fp.orientation_deg = static_cast<int>(orientation);
    }
    if (!fp.aps.emplace(ap_id, stats).second) {
      reader.fail("duplicate row for (" + location_id + ", " +
                  std::to_string(orientation) + ", " + ap_id + ")");
    }
  }

  if (fingerprints.empty()) throw ParseError("radio map has no data rows", source);
  std::vector<Fingerprint> list;
  list.reserve(fingerprints.size());
  for (auto& entry : fingerprints) list.push_back(std::move(entry.second));
  return RadioMap(std::move(list));
}

RadioMap load_radio_map(const std::string& path) {
  auto in = csv::open_input(path);
  return load_radio_map(in, path);
}

}  // namespace hybridloc::radiomap
