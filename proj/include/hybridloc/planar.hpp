#pragma once

#include <cmath>
#include <vector>

#include "hybridloc/geo.hpp"

namespace hybridloc::planar {

using geo::MapPoint;
using Polygon = std::vector<MapPoint>;

/// Straight-line distance between two map points.
inline double euclidean(const MapPoint& p, const MapPoint& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
inline double cross(const MapPoint& a, const MapPoint& b, const MapPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// True when the open segments (a, b) and (c, d) cross at a single point
/// interior to both. Endpoint contacts and collinear overlaps are not
/// crossings.
bool properly_intersect(const MapPoint& a, const MapPoint& b,
                        const MapPoint& c, const MapPoint& d);

/// True when the closed segments share any point.
bool segments_touch(const MapPoint& a, const MapPoint& b, const MapPoint& c,
                    const MapPoint& d);

/// True when `p` lies on the closed segment (a, b).
bool on_segment(const MapPoint& p, const MapPoint& a, const MapPoint& b);

/// Even-odd containment. Points on an edge or vertex are inside.
bool point_in_polygon(const MapPoint& p, const Polygon& polygon);

/// At least three distinct vertices and no edge touching a non-adjacent edge.
bool is_simple_polygon(const Polygon& polygon);

}  // namespace hybridloc::planar
