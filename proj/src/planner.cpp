#include "lmprint/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lmprint/error.hpp"
#include "lmprint/units.hpp"

namespace lmprint::plan {

const char* to_string(CornerStrategy s) {
  switch (s) {
    case CornerStrategy::LiftAndRetap: return "lift-and-retap";
    case CornerStrategy::Slowdown: return "slowdown";
    case CornerStrategy::Fillet: return "fillet";
  }
  return "unknown";
}

CornerStrategy corner_strategy_from_string(const std::string& s) {
  if (s == "lift-and-retap") return CornerStrategy::LiftAndRetap;
  if (s == "slowdown") return CornerStrategy::Slowdown;
  if (s == "fillet") return CornerStrategy::Fillet;
  throw Error(ErrorKind::InvalidInput, "unknown corner strategy '" + s + "'");
}

void CornerPolicy::validate() const {
  if (!(threshold_deg > 0.0 && threshold_deg <= 180.0)) {
    throw Error(ErrorKind::InvalidInput, "corner threshold must lie in (0, 180]");
  }
  switch (strategy) {
    case CornerStrategy::LiftAndRetap:
      break;
    case CornerStrategy::Slowdown:
      if (!(slowdown_factor > 0.0 && slowdown_factor <= 1.0)) {
        throw Error(ErrorKind::InvalidInput, "slowdown factor must lie in (0, 1]");
      }
      break;
    case CornerStrategy::Fillet:
      if (!(fillet_radius_mm > 0.0) || !std::isfinite(fillet_radius_mm)) {
        throw Error(ErrorKind::InvalidInput, "fillet radius must be > 0");
      }
      if (!(fillet_tolerance_mm > 0.0)) throw Error(ErrorKind::InvalidInput, "fillet tolerance must be > 0");
      if (threshold_deg >= 180.0) throw Error(ErrorKind::InvalidInput, "fillet needs a threshold below 180");
      break;
  }
}

std::string CornerPolicy::describe() const {
  std::ostringstream os;
  os << to_string(strategy) << "@" << threshold_deg;
  if (strategy == CornerStrategy::Slowdown) os << " factor=" << slowdown_factor;
  if (strategy == CornerStrategy::Fillet) os << " radius_mm=" << fillet_radius_mm;
  return os.str();
}

namespace {

Point2 entry_point(const io::Stroke& s, bool reversed) {
  return reversed ? s.points.back() : s.points.front();
}

Point2 exit_point(const io::Stroke& s, bool reversed) {
  if (s.closed) return s.points.front();
  return reversed ? s.points.front() : s.points.back();
}

}  // namespace

double travel_distance(const io::VectorDrawing& drawing, const std::vector<StrokeVisit>& order) {
  Point2 at{0.0, 0.0};
  double total = 0.0;
  for (const auto& visit : order) {
    const auto& stroke = drawing.strokes.at(visit.index);
    total += distance(at, entry_point(stroke, visit.reversed));
    at = exit_point(stroke, visit.reversed);
  }
  return total;
}

std::vector<StrokeVisit> order_strokes(const io::VectorDrawing& drawing) {
  const std::size_t n = drawing.strokes.size();
  std::vector<StrokeVisit> identity(n);
  for (std::size_t i = 0; i < n; ++i) identity[i] = {i, false};

  std::vector<StrokeVisit> greedy;
  greedy.reserve(n);
  std::vector<bool> used(n, false);
  Point2 at{0.0, 0.0};
  for (std::size_t step = 0; step < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    StrokeVisit choice;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const auto& stroke = drawing.strokes[i];
      for (bool reversed : {false, true}) {
        if (reversed && stroke.closed) continue;
        const double d = distance(at, entry_point(stroke, reversed));
        if (d < best) {
          best = d;
          choice = {i, reversed};
        }
      }
    }
    used[choice.index] = true;
    greedy.push_back(choice);
    at = exit_point(drawing.strokes[choice.index], choice.reversed);
  }
  return travel_distance(drawing, greedy) <= travel_distance(drawing, identity) ? greedy : identity;
}

std::vector<Point2> stroke_path(const io::Stroke& stroke, bool reversed) {
  std::vector<Point2> path = stroke.points;
  if (reversed && !stroke.closed) std::reverse(path.begin(), path.end());
  if (stroke.closed) path.push_back(path.front());
  return path;
}

namespace {

/// A Tap..Lift stretch: vertices plus one speed per segment.
struct Run {
  std::vector<Point2> points;
  std::vector<double> speeds;
};

void push_point(Run& run, Point2 p, double speed) {
  if (!run.points.empty()) {
    if (run.points.back() == p) return;
    run.speeds.push_back(speed);
  }
  run.points.push_back(p);
}

/// Interior angle at path[i]; for closed paths the first/last vertex wraps.
std::optional<double> vertex_angle(const std::vector<Point2>& path, std::size_t i, bool closed) {
  const std::size_t last = path.size() - 1;
  if (i > 0 && i < last) return interior_angle_deg(path[i - 1], path[i], path[i + 1]);
  if (closed && last >= 2) return interior_angle_deg(path[last - 1], path[0], path[1]);
  return std::nullopt;
}

std::vector<Run> lift_and_retap(const std::vector<Point2>& path, const CornerPolicy& policy, double speed) {
  std::vector<Run> runs(1);
  push_point(runs.back(), path[0], speed);
  for (std::size_t i = 1; i < path.size(); ++i) {
    push_point(runs.back(), path[i], speed);
    if (i + 1 < path.size() && policy.is_corner(*vertex_angle(path, i, false))) {
      runs.emplace_back();
      push_point(runs.back(), path[i], speed);
    }
  }
  return runs;
}

std::vector<Run> slowdown(const std::vector<Point2>& path, bool closed, const CornerPolicy& policy, double speed) {
  const std::size_t segments = path.size() - 1;
  std::vector<bool> corner(path.size(), false);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (auto angle = vertex_angle(path, i, closed)) corner[i] = policy.is_corner(*angle);
  }
  if (closed) corner.back() = corner.front();
  Run run;
  run.points = path;
  for (std::size_t k = 0; k < segments; ++k) {
    const bool slow = corner[k] || corner[k + 1];
    run.speeds.push_back(slow ? speed * policy.slowdown_factor : speed);
  }
  return {run};
}

struct FilletArc {
  std::vector<Point2> points;  // tangent-in .. tangent-out
};

// Round the corner at `v` between incoming direction from `prev` and outgoing
// to `next`. Returns nothing when the corner is a full reversal.
std::optional<FilletArc> make_fillet(Point2 prev, Point2 v, Point2 next, const CornerPolicy& policy) {
  const double len_in = distance(prev, v);
  const double len_out = distance(v, next);
  const Point2 u_in = (v - prev) * (1.0 / len_in);
  const Point2 u_out = (next - v) * (1.0 / len_out);
  const double interior = units::deg_to_rad(interior_angle_deg(prev, v, next));
  if (interior < 1e-9) return std::nullopt;

  const double half = interior / 2.0;
  double radius = policy.fillet_radius_mm;
  double tangent = radius / std::tan(half);
  const double max_tangent = 0.45 * std::min(len_in, len_out);
  if (tangent > max_tangent) {
    tangent = max_tangent;
    radius = tangent * std::tan(half);
  }
  const Point2 t_in = v - u_in * tangent;
  const Point2 t_out = v + u_out * tangent;
  const double turn_sign = cross(u_in, u_out) > 0.0 ? 1.0 : -1.0;
  const Point2 normal_in{-u_in.y * turn_sign, u_in.x * turn_sign};
  const Point2 center = t_in + normal_in * radius;

  const double sweep = std::numbers::pi - interior;
  const double tol = policy.fillet_tolerance_mm;
  const double chord_step = tol >= radius ? std::numbers::pi : 2.0 * std::acos(1.0 - tol / radius);
  // Each flattened vertex turns by `step`; keep it below the corner threshold.
  const double corner_step = 0.9 * units::deg_to_rad(180.0 - policy.threshold_deg);
  const double step = std::min(chord_step, corner_step);
  const int pieces = std::max(1, static_cast<int>(std::ceil(sweep / step)));

  FilletArc arc;
  arc.points.push_back(t_in);
  const Point2 r0 = t_in - center;
  for (int k = 1; k < pieces; ++k) {
    const double phi = turn_sign * sweep * k / pieces;
    const double c = std::cos(phi), s = std::sin(phi);
    arc.points.push_back(center + Point2{r0.x * c - r0.y * s, r0.x * s + r0.y * c});
  }
  arc.points.push_back(t_out);
  return arc;
}

std::vector<Run> fillet(const std::vector<Point2>& path, bool closed, const CornerPolicy& policy, double speed) {
  const std::size_t n = closed ? path.size() - 1 : path.size();  // distinct vertices
  std::vector<std::vector<Point2>> replacement(n);
  std::vector<bool> reversal(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    replacement[i] = {path[i]};
    if (!closed && (i == 0 || i + 1 == n)) continue;
    if (closed && n < 3) continue;
    const Point2 prev = path[(i + n - 1) % n];
    const Point2 next = path[(i + 1) % n];
    if (!policy.is_corner(interior_angle_deg(prev, path[i], next))) continue;
    if (auto arc = make_fillet(prev, path[i], next, policy)) {
      replacement[i] = std::move(arc->points);
    } else {
      reversal[i] = true;
    }
  }

  std::vector<Run> runs(1);
  auto emit_vertex = [&](std::size_t i, bool allow_break) {
    for (const auto& p : replacement[i]) push_point(runs.back(), p, speed);
    if (allow_break && reversal[i]) {
      // Full reversal: lift and retap.
      runs.emplace_back();
      push_point(runs.back(), replacement[i].back(), speed);
    }
  };
  if (!closed) {
    for (std::size_t i = 0; i < n; ++i) emit_vertex(i, i + 1 < n);
    return runs;
  }
  // Closed: start at vertex 0's outgoing point and wrap back to it.
  const Point2 start = replacement[0].back();
  push_point(runs.back(), start, speed);
  for (std::size_t i = 1; i < n; ++i) emit_vertex(i, true);
  for (const auto& p : replacement[0]) push_point(runs.back(), p, speed);
  return runs;
}

}  // namespace

Toolpath plan(const io::VectorDrawing& drawing, const MachineSettings& settings, const CornerPolicy& policy,
              const MachineLimits& limits, const SettingCalibration& calibration) {
  drawing.validate();
  policy.validate();
  const SettingsVerdict verdict = validate_settings(settings, limits, calibration);
  if (!verdict.acceptable()) {
    std::string list;
    for (const auto& v : verdict.violations) list += (list.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::PlanRefused, list);
  }
  const double speed = calibration.speed_to_velocity_mm_s(settings.speed_setting);
  const ContactForce force = calibration.pressure_to_force(settings.pressure_setting);
  if (!(speed > 0.0)) throw Error(ErrorKind::PlanRefused, "speed setting 0 cannot draw");

  Toolpath toolpath;
  toolpath.metadata = {drawing.id, policy.describe()};
  for (const auto& visit : order_strokes(drawing)) {
    const auto& stroke = drawing.strokes[visit.index];
    const std::vector<Point2> path = stroke_path(stroke, visit.reversed);
    std::vector<Run> runs;
    switch (policy.strategy) {
      case CornerStrategy::LiftAndRetap: runs = lift_and_retap(path, policy, speed); break;
      case CornerStrategy::Slowdown: runs = slowdown(path, stroke.closed, policy, speed); break;
      case CornerStrategy::Fillet: runs = fillet(path, stroke.closed, policy, speed); break;
    }
    for (const auto& run : runs) {
      if (run.points.size() < 2) continue;
      toolpath.actions.emplace_back(Tap{run.points.front(), force.newtons});
      for (std::size_t k = 1; k < run.points.size(); ++k) {
        toolpath.actions.emplace_back(Move{run.points[k], run.speeds[k - 1], force.grams});
      }
      toolpath.actions.emplace_back(Lift{});
    }
  }
  return toolpath;
}

Estimate estimate(const Toolpath& toolpath, const ProcessModel& process, double dwell_s) {
  if (!(dwell_s >= 0.0)) throw Error(ErrorKind::InvalidInput, "dwell must be >= 0");
  Estimate result;
  std::optional<Point2> at;
  double volume_m3 = 0.0;
  for (const auto& action : toolpath.actions) {
    if (const auto* tap = std::get_if<Tap>(&action)) {
      at = tap->at;
      result.print_time_s += dwell_s;
    } else if (const auto* move = std::get_if<Move>(&action)) {
      if (!at) throw Error(ErrorKind::IllegalAction, "move before the first tap");
      if (!(move->speed_mm_s > 0.0)) throw Error(ErrorKind::Domain, "zero-speed segment");
      const double duration = distance(*at, move->to) / move->speed_mm_s;
      result.print_time_s += duration;
      volume_m3 += process.evaluate(move->speed_mm_s, move->pressure_g).flux_m3_s * duration;
      at = move->to;
    } else {
      result.print_time_s += dwell_s;
    }
  }
  result.ink_volume_mm3 = units::m3_to_mm3(volume_m3);
  return result;
}

}  // namespace lmprint::plan
