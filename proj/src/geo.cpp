#include "hybridloc/geo.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hybridloc/error.hpp"

namespace hybridloc::geo {

namespace {

constexpr std::string_view kDegreeSign = "\xC2\xB0";

class DmsCursor {
 public:
  explicit DmsCursor(std::string_view text) : text_(text) {}

  void skip_blanks() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }

  std::string_view digits(bool allow_fraction) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (allow_fraction && pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t frac = pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      if (pos_ == frac) return {};
    }
    return text_.substr(start, pos_ - start);
  }

  bool consume(std::string_view token) {
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() { ++pos_; }
  bool done() const { return pos_ == text_.size(); }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void dms_error(std::string_view text, const std::string& what) {
  throw ParseError("DMS '" + std::string(text) + "': " + what);
}

double to_number(std::string_view digits) {
  double value = 0.0;
  std::from_chars(digits.data(), digits.data() + digits.size(), value);
  return value;
}

struct ParsedDms {
  double value;
  char hemisphere;
};

ParsedDms parse_components(std::string_view text) {
  DmsCursor cur(text);
  cur.skip_blanks();

  auto deg_text = cur.digits(false);
  if (deg_text.empty()) dms_error(text, "degrees: expected an integer");
  cur.skip_blanks();
  if (!cur.consume(kDegreeSign) && !cur.consume("d")) {
    dms_error(text, "degrees: missing degree mark");
  }
  cur.skip_blanks();

  auto min_text = cur.digits(false);
  if (min_text.empty()) dms_error(text, "minutes: expected an integer");
  cur.skip_blanks();
  if (!cur.consume("'") && !cur.consume("m")) {
    dms_error(text, "minutes: missing minute mark");
  }
  cur.skip_blanks();

  auto sec_text = cur.digits(true);
  if (sec_text.empty()) dms_error(text, "seconds: expected a number");
  cur.skip_blanks();
  if (!cur.consume("\"") && !cur.consume("s")) {
    dms_error(text, "seconds: missing second mark");
  }
  cur.skip_blanks();

  char hemisphere = cur.peek();
  if (hemisphere != 'N' && hemisphere != 'S' && hemisphere != 'E' &&
      hemisphere != 'W') {
    dms_error(text, "hemisphere: expected one of N, S, E, W");
  }
  cur.advance();
  cur.skip_blanks();
  if (!cur.done()) dms_error(text, "trailing characters after hemisphere");

  const double degrees = to_number(deg_text);
  const double minutes = to_number(min_text);
  const double seconds = to_number(sec_text);
  if (minutes >= 60.0) dms_error(text, "minutes: must be in [0, 60)");
  if (seconds >= 60.0) dms_error(text, "seconds: must be in [0, 60)");

  const double bound = (hemisphere == 'N' || hemisphere == 'S') ? 90.0 : 180.0;
  double value = degrees + minutes / 60.0 + seconds / 3600.0;
  if (value > bound) {
    dms_error(text, "degrees: out of range for hemisphere " +
                        std::string(1, hemisphere));
  }
  if (hemisphere == 'S' || hemisphere == 'W') value = -value;
  return {value, hemisphere};
}

GeoCoordinate read_geo(const nlohmann::json& point, const std::string& name,
                       const std::string& source) {
  try {
    double lat = parse_dms(point.at("lat_dms").get<std::string>(), Axis::Latitude);
    double lon = parse_dms(point.at("lon_dms").get<std::string>(), Axis::Longitude);
    return GeoCoordinate::checked(lat, lon);
  } catch (const ParseError& e) {
    throw ParseError("reference '" + name + "': " + e.detail(), source);
  }
}

}  // namespace

GeoCoordinate GeoCoordinate::checked(double lat_deg, double lon_deg) {
  if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg)) {
    throw GeometryError("geodetic coordinate must be finite");
  }
  if (lat_deg < -90.0 || lat_deg > 90.0) {
    throw GeometryError("latitude out of range [-90, 90]");
  }
  if (lon_deg < -180.0 || lon_deg > 180.0) {
    throw GeometryError("longitude out of range [-180, 180]");
  }
  return {lat_deg, lon_deg};
}

void ReferencePair::validate() const {
  if (a_geo.lat_deg == b_geo.lat_deg) {
    throw GeometryError("reference points share a latitude");
  }
  if (a_geo.lon_deg == b_geo.lon_deg) {
    throw GeometryError("reference points share a longitude");
  }
}

double parse_dms(std::string_view text) { return parse_components(text).value; }

double parse_dms(std::string_view text, Axis axis) {
  auto parsed = parse_components(text);
  const bool is_lat = parsed.hemisphere == 'N' || parsed.hemisphere == 'S';
  if (is_lat != (axis == Axis::Latitude)) {
    dms_error(text, axis == Axis::Latitude
                        ? "hemisphere: latitude needs N or S"
                        : "hemisphere: longitude needs E or W");
  }
  return parsed.value;
}

std::string format_dms(double degrees, Axis axis, int second_decimals) {
  const bool negative = degrees < 0.0;
  char hemisphere = axis == Axis::Latitude ? (negative ? 'S' : 'N')
                                           : (negative ? 'W' : 'E');
  double magnitude = std::fabs(degrees);
  long long whole = static_cast<long long>(std::floor(magnitude));
  double rem_minutes = (magnitude - static_cast<double>(whole)) * 60.0;
  long long minutes = static_cast<long long>(std::floor(rem_minutes));
  double seconds = (rem_minutes - static_cast<double>(minutes)) * 60.0;

  const double scale = std::pow(10.0, second_decimals);
  seconds = std::round(seconds * scale) / scale;
  if (seconds >= 60.0) {
    seconds = 0.0;
    ++minutes;
  }
  if (minutes >= 60) {
    minutes = 0;
    ++whole;
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%lld%s%02lld'%0*.*f\"%c", whole,
                std::string(kDegreeSign).c_str(), minutes,
                second_decimals > 0 ? second_decimals + 3 : 2,
                second_decimals, seconds, hemisphere);
  return buf;
}

MapPoint interpolate_map_position(const GeoCoordinate& position,
                                  const ReferencePair& refs) {
  refs.validate();
  const auto& a = refs.a_geo;
  const auto& b = refs.b_geo;
  const double lat_ratio = (position.lat_deg - a.lat_deg) / (b.lat_deg - a.lat_deg);
  const double lon_ratio = (position.lon_deg - a.lon_deg) / (b.lon_deg - a.lon_deg);
  return {lat_ratio * (refs.b_map.x - refs.a_map.x) + refs.a_map.x,
          lon_ratio * (refs.b_map.y - refs.a_map.y) + refs.a_map.y};
}

GeoCoordinate map_to_geo(const MapPoint& position, const ReferencePair& refs) {
  refs.validate();
  if (refs.a_map.x == refs.b_map.x || refs.a_map.y == refs.b_map.y) {
    throw GeometryError("reference points share a map x or y; cannot invert");
  }
  const double x_ratio = (position.x - refs.a_map.x) / (refs.b_map.x - refs.a_map.x);
  const double y_ratio = (position.y - refs.a_map.y) / (refs.b_map.y - refs.a_map.y);
  return {x_ratio * (refs.b_geo.lat_deg - refs.a_geo.lat_deg) + refs.a_geo.lat_deg,
          y_ratio * (refs.b_geo.lon_deg - refs.a_geo.lon_deg) + refs.a_geo.lon_deg};
}

ReferencePair parse_reference_pair(std::string_view json_text,
                                   const std::string& source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), source);
  }

  ReferencePair refs;
  try {
    const auto& a = doc.at("a");
    const auto& b = doc.at("b");
    refs.a_geo = read_geo(a, "a", source);
    refs.b_geo = read_geo(b, "b", source);
    refs.a_map = {a.at("x").get<double>(), a.at("y").get<double>()};
    refs.b_map = {b.at("x").get<double>(), b.at("y").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("reference pair: ") + e.what(), source);
  }
  try {
    refs.validate();
  } catch (const GeometryError& e) {
    throw ParseError(e.what(), source);
  }
  return refs;
}

ReferencePair load_reference_pair(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_reference_pair(buffer.str(), path);
}

}  // namespace hybridloc::geo
