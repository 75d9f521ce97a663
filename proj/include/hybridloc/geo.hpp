#pragma once

#include <string>
#include <string_view>

namespace hybridloc::geo {

/// Geodetic position in decimal degrees. Use `checked` to construct from
/// untrusted input.
struct GeoCoordinate {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  static GeoCoordinate checked(double lat_deg, double lon_deg);

  friend bool operator==(const GeoCoordinate&, const GeoCoordinate&) = default;
};

/// Planar map position. Pixels for the outdoor georeference window, meters
/// for the indoor building frame.
struct MapPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const MapPoint&, const MapPoint&) = default;
};

struct TimedPoint {
  long long epoch_ms = 0;
  MapPoint position;

  friend bool operator==(const TimedPoint&, const TimedPoint&) = default;
};

/// Two surveyed anchors A and B tying the map frame to geodetic coordinates.
struct ReferencePair {
  GeoCoordinate a_geo;
  MapPoint a_map;
  GeoCoordinate b_geo;
  MapPoint b_map;

  /// Throws GeometryError if A and B share a latitude or a longitude.
  void validate() const;

  friend bool operator==(const ReferencePair&, const ReferencePair&) = default;
};

enum class Axis { Latitude, Longitude };

/// Parses `D°MM'SS.SS"H` (H one of N, S, E, W) into signed decimal degrees.
/// ASCII `d`, `m`, `s` are accepted in place of the three unit marks and
/// blanks may separate the components. S and W are negative.
/// Throws ParseError naming the offending field.
double parse_dms(std::string_view text);

/// As parse_dms, but also requires an N/S (or E/W) hemisphere letter.
double parse_dms(std::string_view text, Axis axis);

/// Formats signed decimal degrees as `D°MM'SS.SS"H` with `second_decimals`
/// fractional digits on the seconds.
std::string format_dms(double degrees, Axis axis, int second_decimals = 2);

/// Relative interpolation between the anchors: the latitude ratio scales the
/// map x axis and the longitude ratio scales the map y axis. Points outside
/// the A-B span are extrapolated linearly.
MapPoint interpolate_map_position(const GeoCoordinate& position,
                                  const ReferencePair& refs);

/// Inverse of interpolate_map_position. Requires the anchors to differ in
/// both map x and map y.
GeoCoordinate map_to_geo(const MapPoint& position, const ReferencePair& refs);

/// Reference-pair JSON:
/// `{"a": {"lat_dms", "lon_dms", "x", "y"}, "b": {...}}`.
ReferencePair parse_reference_pair(std::string_view json_text,
                                   const std::string& source = {});
ReferencePair load_reference_pair(const std::string& path);

}  // namespace hybridloc::geo
