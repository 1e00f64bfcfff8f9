#include "lmprint/print_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lmprint/error.hpp"
#include "lmprint/units.hpp"
#include "lmprint/wetting_stability.hpp"

namespace lmprint::sim {

const char* to_string(HeadState s) {
  switch (s) {
    case HeadState::Sealed: return "sealed";
    case HeadState::Tapped: return "tapped";
    case HeadState::Drawing: return "drawing";
    case HeadState::Lifted: return "lifted";
  }
  return "unknown";
}

HeadState step_head(HeadState state, const plan::Action& action) {
  auto illegal = [&](const char* what) -> HeadState {
    throw Error(ErrorKind::IllegalAction, std::string(what) + " while " + to_string(state));
  };
  if (std::holds_alternative<plan::Tap>(action)) {
    if (state == HeadState::Sealed || state == HeadState::Lifted) return HeadState::Tapped;
    return illegal("tap");
  }
  if (std::holds_alternative<plan::Move>(action)) {
    if (state == HeadState::Tapped || state == HeadState::Drawing) return HeadState::Drawing;
    return illegal("move");
  }
  if (state == HeadState::Drawing) return HeadState::Lifted;
  return illegal("lift");
}

std::vector<std::string> flag_names(std::uint8_t flags) {
  std::vector<std::string> names;
  if (flags & kCornerRisk) names.emplace_back("corner-risk");
  if (flags & kSlipRisk) names.emplace_back("slip-risk");
  if (flags & kSpeedWarning) names.emplace_back("speed-warning");
  return names;
}

SimulationResult simulate(const plan::Toolpath& toolpath, const SimulationEnvironment& env) {
  env.policy.validate();
  env.limits.validate();
  if (!(env.slip_limit >= 0.0)) throw Error(ErrorKind::InvalidInput, "slip limit must be >= 0");
  if (!(env.dwell_s >= 0.0)) throw Error(ErrorKind::InvalidInput, "dwell must be >= 0");
  if (env.width_source == WidthSource::Empirical && !env.empirical) {
    throw Error(ErrorKind::InvalidInput, "empirical width source selected without a fitted model");
  }

  SimulationResult result;
  std::set<std::string> warnings;
  HeadState state = HeadState::Sealed;
  Point2 at;
  std::optional<Point2> previous_start;  // start of the previous segment in this run
  std::size_t run = 0;
  double volume_m3 = 0.0;

  for (const auto& action : toolpath.actions) {
    state = step_head(state, action);
    if (const auto* tap = std::get_if<plan::Tap>(&action)) {
      at = tap->at;
      previous_start.reset();
      run = result.totals.runs++;
      result.totals.print_time_s += env.dwell_s;
      continue;
    }
    if (std::holds_alternative<plan::Lift>(action)) {
      result.totals.print_time_s += env.dwell_s;
      continue;
    }
    const auto& move = std::get<plan::Move>(action);
    if (move.to == at) continue;

    const SettingsVerdict verdict = validate_motion(move.speed_mm_s, move.pressure_g, env.limits);
    if (!verdict.acceptable()) throw Error(ErrorKind::InvalidSetting, verdict.violations.front());

    TraceSegment seg;
    seg.start = at;
    seg.end = move.to;
    seg.run = run;
    seg.speed_mm_s = move.speed_mm_s;
    seg.pressure_g = move.pressure_g;

    const plan::ProcessPoint point = env.process.evaluate(move.speed_mm_s, move.pressure_g);
    const wetting::AngleLookup angle = wetting::angle_at_force(env.process.substrate, point.force_n);
    if (angle.clamped) {
      ++result.totals.clamped_angle_lookups;
      std::ostringstream msg;
      msg << "contact force " << point.force_n << " N is outside the angle table of '"
          << env.process.substrate.name << "'; angle clamped to " << angle.angle_deg << " deg";
      warnings.insert(msg.str());
    }
    const double speed_m_s = units::mm_to_m(move.speed_mm_s);
    const wetting::LineEstimate line =
        wetting::stable_line_width(units::deg_to_rad(angle.angle_deg), point.flux_m3_s, speed_m_s);

    seg.flux_m3_s = point.flux_m3_s;
    seg.creep = point.creep;
    seg.area_m2 = line.cross_section_area_m2;
    seg.contact_angle_deg = angle.angle_deg;
    seg.width_m = line.width_m;
    if (env.empirical) {
      const double empirical = env.empirical->width_m(move.speed_mm_s, move.pressure_g);
      if (env.width_source == WidthSource::Empirical) {
        seg.alternate_width_m = line.width_m;
        seg.width_m = empirical;
      } else {
        seg.alternate_width_m = empirical;
      }
      if (line.width_m > 0.0) {
        const double rel = std::abs(line.width_m - empirical) / line.width_m;
        result.totals.max_width_discrepancy_rel = std::max(result.totals.max_width_discrepancy_rel.value_or(0.0), rel);
      }
    }

    if (previous_start && env.policy.is_corner(interior_angle_deg(*previous_start, at, move.to))) {
      seg.flags |= kCornerRisk;
    }
    if (point.full_slip || std::abs(point.creep) > env.slip_limit) seg.flags |= kSlipRisk;
    if (verdict.status == VerdictStatus::QualityWarning) seg.flags |= kSpeedWarning;
    result.totals.corner_risks += (seg.flags & kCornerRisk) ? 1 : 0;
    result.totals.slip_risks += (seg.flags & kSlipRisk) ? 1 : 0;
    result.totals.speed_warnings += (seg.flags & kSpeedWarning) ? 1 : 0;
    if (point.full_slip) warnings.insert("bead in full slip; rolling transfer lost on flagged segments");

    seg.duration_s = seg.length_mm() / move.speed_mm_s;
    result.totals.print_time_s += seg.duration_s;
    result.totals.printed_length_mm += seg.length_mm();
    volume_m3 += seg.flux_m3_s * seg.duration_s;

    previous_start = at;
    at = move.to;
    result.trace.segments.push_back(seg);
  }
  if (state == HeadState::Tapped || state == HeadState::Drawing) {
    throw Error(ErrorKind::IllegalAction, "toolpath ends with the bead down");
  }
  result.totals.segments = result.trace.segments.size();
  result.totals.ink_volume_mm3 = units::m3_to_mm3(volume_m3);
  result.warnings.assign(warnings.begin(), warnings.end());
  return result;
}

namespace {

struct PixelSpan {
  long long x0, x1, y0, y1;  // inclusive global pixel indices
};

// Global grid: pixel (i, j) has its centre at ((i + 0.5) s, (j + 0.5) s).
PixelSpan covering_span(const TraceSegment& seg, double scale) {
  const double r = seg.width_mm() / 2.0;
  return {static_cast<long long>(std::floor((std::min(seg.start.x, seg.end.x) - r) / scale)) - 1,
          static_cast<long long>(std::ceil((std::max(seg.start.x, seg.end.x) + r) / scale)) + 1,
          static_cast<long long>(std::floor((std::min(seg.start.y, seg.end.y) - r) / scale)) - 1,
          static_cast<long long>(std::ceil((std::max(seg.start.y, seg.end.y) + r) / scale)) + 1};
}

template <typename Visit>
void for_each_covered(const TraceSegment& seg, double scale, Visit&& visit) {
  const double r = seg.width_mm() / 2.0;
  if (!(r > 0.0)) return;
  const PixelSpan span = covering_span(seg, scale);
  for (long long j = span.y0; j <= span.y1; ++j) {
    const double cy = (static_cast<double>(j) + 0.5) * scale;
    for (long long i = span.x0; i <= span.x1; ++i) {
      const Point2 c{(static_cast<double>(i) + 0.5) * scale, cy};
      if (point_segment_distance(c, seg.start, seg.end) <= r) visit(i, j);
    }
  }
}

}  // namespace

std::size_t segment_pixel_count(const TraceSegment& segment, double scale_mm_per_px) {
  if (!(scale_mm_per_px > 0.0)) throw Error(ErrorKind::InvalidInput, "raster scale must be > 0");
  std::size_t count = 0;
  for_each_covered(segment, scale_mm_per_px, [&](long long, long long) { ++count; });
  return count;
}

io::RasterImage rasterize(const DepositedTrace& trace, const RasterOptions& options) {
  const double scale = options.scale_mm_per_px;
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::InvalidInput, "raster scale must be > 0");
  if (trace.segments.empty()) return io::RasterImage(1, 1, scale, {0.0, 0.0});

  Bounds bounds;
  for (const auto& seg : trace.segments) {
    const double r = seg.width_mm() / 2.0 + options.margin_mm;
    bounds.expand(Point2{std::min(seg.start.x, seg.end.x) - r, std::min(seg.start.y, seg.end.y) - r});
    bounds.expand(Point2{std::max(seg.start.x, seg.end.x) + r, std::max(seg.start.y, seg.end.y) + r});
  }
  // Snap to the global pixel grid.
  const long long i0 = static_cast<long long>(std::floor(bounds.min.x / scale));
  const long long i1 = static_cast<long long>(std::ceil(bounds.max.x / scale));
  const long long j0 = static_cast<long long>(std::floor(bounds.min.y / scale));
  const long long j1 = static_cast<long long>(std::ceil(bounds.max.y / scale));
  const long long w = std::max(1LL, i1 - i0);
  const long long h = std::max(1LL, j1 - j0);
  if (static_cast<double>(w) * static_cast<double>(h) > static_cast<double>(options.max_pixels)) {
    std::ostringstream msg;
    msg << "raster of " << w << "x" << h << " px exceeds the limit of " << options.max_pixels << " px";
    throw Error(ErrorKind::ImageTooLarge, msg.str());
  }
  io::RasterImage image(static_cast<int>(w), static_cast<int>(h), scale,
                        {static_cast<double>(i0) * scale, static_cast<double>(j1) * scale});
  for (const auto& seg : trace.segments) {
    for_each_covered(seg, scale, [&](long long i, long long j) {
      const long long x = i - i0;
      const long long y = j1 - 1 - j;
      if (x >= 0 && x < w && y >= 0 && y < h) image.at(static_cast<int>(x), static_cast<int>(y)) = 255;
    });
  }
  return image;
}

double rasterized_volume_mm3(const DepositedTrace& trace, double scale_mm_per_px) {
  if (!(scale_mm_per_px > 0.0)) throw Error(ErrorKind::InvalidInput, "raster scale must be > 0");
  struct Hit {
    long long i, j;
    double distance;
    std::size_t segment;
  };
  const double pixel_area = scale_mm_per_px * scale_mm_per_px;
  const auto& segs = trace.segments;
  double volume = 0.0;
  std::vector<Hit> hits;
  for (std::size_t first = 0; first < segs.size();) {
    std::size_t last = first;
    while (last < segs.size() && segs[last].run == segs[first].run) ++last;
    if (last - first == 1) {
      if (segs[first].width_m > 0.0) {
        volume += static_cast<double>(segment_pixel_count(segs[first], scale_mm_per_px)) * pixel_area *
                  units::m2_to_mm2(segs[first].area_m2) / segs[first].width_mm();
      }
      first = last;
      continue;
    }
    hits.clear();
    for (std::size_t k = first; k < last; ++k) {
      if (!(segs[k].width_m > 0.0)) continue;
      for_each_covered(segs[k], scale_mm_per_px, [&](long long i, long long j) {
        const Point2 c{(static_cast<double>(i) + 0.5) * scale_mm_per_px,
                       (static_cast<double>(j) + 0.5) * scale_mm_per_px};
        hits.push_back({i, j, point_segment_distance(c, segs[k].start, segs[k].end), k});
      });
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
      if (a.j != b.j) return a.j < b.j;
      if (a.i != b.i) return a.i < b.i;
      if (a.distance != b.distance) return a.distance < b.distance;
      return a.segment < b.segment;
    });
    for (std::size_t h = 0; h < hits.size(); ++h) {
      if (h > 0 && hits[h].i == hits[h - 1].i && hits[h].j == hits[h - 1].j) continue;
      const auto& seg = segs[hits[h].segment];
      volume += pixel_area * units::m2_to_mm2(seg.area_m2) / seg.width_mm();
    }
    first = last;
  }
  return volume;
}

double volume_check_scale(const DepositedTrace& trace, double preview_scale, double min_px_across) {
  double scale = preview_scale;
  for (const auto& seg : trace.segments) {
    if (seg.width_m > 0.0) scale = std::min(scale, seg.width_mm() / min_px_across);
  }
  return scale;
}

}  // namespace lmprint::sim
