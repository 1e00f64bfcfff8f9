#include "lmprint/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace lmprint {

void Bounds::expand(Point2 p) {
  min.x = std::min(min.x, p.x);
  min.y = std::min(min.y, p.y);
  max.x = std::max(max.x, p.x);
  max.y = std::max(max.y, p.y);
}

void Bounds::expand(const Bounds& other) {
  if (other.empty()) return;
  expand(other.min);
  expand(other.max);
}

bool Bounds::contains(Point2 p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
}

double project_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
}

Point2 lerp(Point2 a, Point2 b, double t) { return a + (b - a) * t; }

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return distance(p, lerp(a, b, project_to_segment(p, a, b)));
}

SegmentProximity segment_segment_proximity(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  const Point2 da = a1 - a0;
  const Point2 db = b1 - b0;
  const double denom = cross(da, db);
  if (denom != 0.0) {
    const double t = cross(b0 - a0, db) / denom;
    const double u = cross(b0 - a0, da) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return {0.0, t, u};
  }
  // Non-intersecting: the minimum is attained at an endpoint of one segment.
  SegmentProximity best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  auto consider = [&](double d, double t, double u) {
    if (d < best.distance) best = {d, t, u};
  };
  double u = project_to_segment(a0, b0, b1);
  consider(distance(a0, lerp(b0, b1, u)), 0.0, u);
  u = project_to_segment(a1, b0, b1);
  consider(distance(a1, lerp(b0, b1, u)), 1.0, u);
  double t = project_to_segment(b0, a0, a1);
  consider(distance(b0, lerp(a0, a1, t)), t, 0.0);
  t = project_to_segment(b1, a0, a1);
  consider(distance(b1, lerp(a0, a1, t)), t, 1.0);
  return best;
}

double interior_angle_deg(Point2 prev, Point2 vertex, Point2 next) {
  const Point2 u = prev - vertex;
  const Point2 v = next - vertex;
  const double angle = std::atan2(std::abs(cross(u, v)), dot(u, v));
  return angle * 180.0 / std::numbers::pi;
}

double polyline_length(std::span<const Point2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

}  // namespace lmprint
