#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace lmprint {

/// Planar point or vector. Drawing coordinates are millimetres.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double k) { return {a.x * k, a.y * k}; }
inline Point2 operator*(double k, Point2 a) { return {a.x * k, a.y * k}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

struct Bounds {
  Point2 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  bool empty() const { return min.x > max.x || min.y > max.y; }
  void expand(Point2 p);
  void expand(const Bounds& other);
  bool contains(Point2 p) const;
  double width() const { return empty() ? 0.0 : max.x - min.x; }
  double height() const { return empty() ? 0.0 : max.y - min.y; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Closest point on segment [a, b] to p, as the parameter t in [0, 1].
double project_to_segment(Point2 p, Point2 a, Point2 b);
double point_segment_distance(Point2 p, Point2 a, Point2 b);

struct SegmentProximity {
  double distance = 0.0;
  double t_first = 0.0;   // parameter on the first segment
  double t_second = 0.0;  // parameter on the second segment
};

/// Minimum distance between two closed segments plus the parameters of a
/// closest pair (zero distance when they intersect).
SegmentProximity segment_segment_proximity(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

Point2 lerp(Point2 a, Point2 b, double t);

/// Interior angle at `vertex` in degrees: 180 for a straight continuation,
/// 0 for a full reversal.
double interior_angle_deg(Point2 prev, Point2 vertex, Point2 next);

double polyline_length(std::span<const Point2> points);

}  // namespace lmprint
