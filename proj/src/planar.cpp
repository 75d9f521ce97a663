#include "hybridloc/planar.hpp"

#include <algorithm>

namespace hybridloc::planar {

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool properly_intersect(const MapPoint& a, const MapPoint& b,
                        const MapPoint& c, const MapPoint& d) {
  const int o1 = sign(cross(a, b, c));
  const int o2 = sign(cross(a, b, d));
  const int o3 = sign(cross(c, d, a));
  const int o4 = sign(cross(c, d, b));
  return o1 * o2 < 0 && o3 * o4 < 0;
}

bool on_segment(const MapPoint& p, const MapPoint& a, const MapPoint& b) {
  if (cross(a, b, p) != 0.0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_touch(const MapPoint& a, const MapPoint& b, const MapPoint& c,
                    const MapPoint& d) {
  if (properly_intersect(a, b, c, d)) return true;
  return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) ||
         on_segment(b, c, d);
}

bool point_in_polygon(const MapPoint& p, const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const MapPoint& a = polygon[i];
    const MapPoint& b = polygon[j];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

bool is_simple_polygon(const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (polygon[i] == polygon[(i + 1) % n]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const MapPoint& a = polygon[i];
    const MapPoint& b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const MapPoint& c = polygon[j];
      const MapPoint& d = polygon[(j + 1) % n];
      const bool next = j == i + 1;
      const bool wraps = i == 0 && j == n - 1;
      if (next) {
        // Shared vertex b == c; the far end must not fold back onto edge i.
        if (on_segment(d, a, b) || on_segment(a, c, d)) return false;
      } else if (wraps) {
        // Shared vertex a == d.
        if (on_segment(c, a, b) || on_segment(b, c, d)) return false;
      } else if (segments_touch(a, b, c, d)) {
        return false;
      }
    }
  }
  // A triangle whose vertices are collinear has zero area.
  if (n == 3 && cross(polygon[0], polygon[1], polygon[2]) == 0.0) return false;
  return true;
}

}  // namespace hybridloc::planar
