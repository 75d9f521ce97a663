#include "hybridloc/radio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hybridloc/error.hpp"

namespace hybridloc::radio {

void AccessPoint::validate() const {
  auto where = [&] { return "access point '" + id + "': "; };
  if (id.empty()) throw ConsistencyError("access point id is empty");
  if (!std::isfinite(position.x) || !std::isfinite(position.y)) {
    throw ConsistencyError(where() + "position must be finite");
  }
  if (!(d0_m > 0.0) || !std::isfinite(d0_m)) {
    throw ConsistencyError(where() + "d0_m must be > 0");
  }
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ConsistencyError(where() + "n must be > 0");
  }
  if (!(sigma_db >= 0.0) || !std::isfinite(sigma_db)) {
    throw ConsistencyError(where() + "sigma_db must be >= 0");
  }
  if (!(p0_dbm >= -100.0 && p0_dbm <= 0.0)) {
    throw ConsistencyError(where() + "p0_dbm must be in [-100, 0]");
  }
}

void Wall::validate() const {
  if (p1 == p2) throw GeometryError("wall endpoints coincide");
  if (!(waf_db >= 0.0) || !std::isfinite(waf_db)) {
    throw ConsistencyError("wall waf_db must be >= 0");
  }
}

void RadioEnvironment::validate() {
  std::set<std::string> ids;
  for (const auto& ap : aps) {
    ap.validate();
    if (!ids.insert(ap.id).second) {
      throw ConsistencyError("duplicate access point id '" + ap.id + "'");
    }
  }
  std::sort(aps.begin(), aps.end(),
            [](const AccessPoint& a, const AccessPoint& b) { return a.id < b.id; });
  for (const auto& wall : walls) wall.validate();
  for (std::size_t i = 0; i < indoor_regions.size(); ++i) {
    if (!planar::is_simple_polygon(indoor_regions[i])) {
      throw GeometryError("indoor region " + std::to_string(i) +
                          " is not a simple polygon with >= 3 vertices");
    }
  }
  if (!(body_attenuation_db >= 0.0) || !std::isfinite(body_attenuation_db)) {
    throw ConsistencyError("body_attenuation_db must be >= 0");
  }
}

const AccessPoint* RadioEnvironment::find_ap(const std::string& id) const {
  for (const auto& ap : aps) {
    if (ap.id == id) return &ap;
  }
  return nullptr;
}

bool RadioEnvironment::is_indoor(const MapPoint& p) const {
  return std::any_of(indoor_regions.begin(), indoor_regions.end(),
                     [&](const planar::Polygon& region) {
                       return planar::point_in_polygon(p, region);
                     });
}

WallCrossings count_walls(const MapPoint& from, const MapPoint& to,
                          std::span<const Wall> walls) {
  WallCrossings out;
  for (const auto& wall : walls) {
    if (planar::properly_intersect(from, to, wall.p1, wall.p2)) {
      ++out.count;
      out.total_waf_db += wall.waf_db;
    }
  }
  return out;
}

double predict_rssi(const AccessPoint& ap, const MapPoint& receiver,
                    std::span<const Wall> walls, Rng* shadowing) {
  const double d = std::max(planar::euclidean(ap.position, receiver), ap.d0_m);
  const double waf = count_walls(ap.position, receiver, walls).total_waf_db;
  double rssi = ap.p0_dbm - 10.0 * ap.n * std::log10(d / ap.d0_m) - waf;
  if (shadowing != nullptr) rssi += ap.sigma_db * shadowing->gaussian();
  return rssi;
}

double invert_distance(double rssi_dbm, const AccessPoint& ap,
                       double total_waf_db) {
  return ap.d0_m *
         std::pow(10.0, (ap.p0_dbm - rssi_dbm - total_waf_db) / (10.0 * ap.n));
}

namespace {

MapPoint read_point(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError("polygon vertex must be an [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

RadioEnvironment parse_environment(std::string_view json_text,
                                   const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), source);
  }

  RadioEnvironment env;
  try {
    for (const auto& j : doc.at("aps")) {
      AccessPoint ap;
      ap.id = j.at("id").get<std::string>();
      ap.position = {j.at("x").get<double>(), j.at("y").get<double>()};
      ap.p0_dbm = j.at("p0_dbm").get<double>();
      ap.d0_m = j.value("d0_m", 1.0);
      ap.n = j.at("n").get<double>();
      ap.sigma_db = j.at("sigma_db").get<double>();
      env.aps.push_back(std::move(ap));
    }
    if (doc.contains("walls")) {
      for (const auto& j : doc.at("walls")) {
        env.walls.push_back({{j.at("x1").get<double>(), j.at("y1").get<double>()},
                             {j.at("x2").get<double>(), j.at("y2").get<double>()},
                             j.at("waf_db").get<double>()});
      }
    }
    if (doc.contains("indoor_regions")) {
      for (const auto& region : doc.at("indoor_regions")) {
        planar::Polygon polygon;
        for (const auto& vertex : region) polygon.push_back(read_point(vertex));
        env.indoor_regions.push_back(std::move(polygon));
      }
    }
    env.body_attenuation_db = doc.value("body_attenuation_db", 5.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("environment: ") + e.what(), source);
  } catch (const ParseError& e) {
    throw ParseError("environment: " + e.detail(), source);
  }

  if (env.aps.empty()) throw ParseError("environment has no access points", source);
  try {
    env.validate();
  } catch (const Error& e) {
    throw ParseError(e.what(), source);
  }
  return env;
}

RadioEnvironment load_environment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_environment(buffer.str(), path);
}

}  // namespace hybridloc::radio
