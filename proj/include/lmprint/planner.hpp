#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "lmprint/core_model.hpp"
#include "lmprint/pattern_io.hpp"
#include "lmprint/process_model.hpp"

namespace lmprint::plan {

/// Lower the bead onto the substrate at `at` and open the gap.
struct Tap {
  Point2 at;
  double force_n = 0.0;

  friend bool operator==(const Tap&, const Tap&) = default;
};

/// Roll to `to` while dispensing.
struct Move {
  Point2 to;
  double speed_mm_s = 0.0;
  double pressure_g = 0.0;

  friend bool operator==(const Move&, const Move&) = default;
};

struct Lift {
  friend bool operator==(const Lift&, const Lift&) = default;
};

using Action = std::variant<Tap, Move, Lift>;

enum class CornerStrategy { LiftAndRetap, Slowdown, Fillet };

/// A vertex is a corner when its interior angle is below `threshold_deg`
/// (180 = straight through).
struct CornerPolicy {
  double threshold_deg = 135.0;
  CornerStrategy strategy = CornerStrategy::LiftAndRetap;
  double slowdown_factor = 0.5;
  double fillet_radius_mm = 0.5;
  double fillet_tolerance_mm = 0.01;

  void validate() const;
  bool is_corner(double interior_deg) const { return interior_deg < threshold_deg; }
  std::string describe() const;
};

const char* to_string(CornerStrategy s);
CornerStrategy corner_strategy_from_string(const std::string& s);

struct ToolpathMetadata {
  std::string drawing_id;
  std::string policy;

  friend bool operator==(const ToolpathMetadata&, const ToolpathMetadata&) = default;
};

struct Toolpath {
  std::vector<Action> actions;
  ToolpathMetadata metadata;

  friend bool operator==(const Toolpath&, const Toolpath&) = default;
};

struct StrokeVisit {
  std::size_t index = 0;
  bool reversed = false;

  friend bool operator==(const StrokeVisit&, const StrokeVisit&) = default;
};

/// Greedy nearest-neighbour over stroke endpoints from the origin, falling
/// back to the identity order when that travels less. Open strokes may be
/// entered from either end; closed strokes start at their first vertex.
std::vector<StrokeVisit> order_strokes(const io::VectorDrawing& drawing);

/// Pen-up travel from the origin through the visits.
double travel_distance(const io::VectorDrawing& drawing, const std::vector<StrokeVisit>& order);

/// Vertex sequence the head follows for a stroke (closed strokes end where they started).
std::vector<Point2> stroke_path(const io::Stroke& stroke, bool reversed);

/// Throws PlanRefused listing every limit violation.
Toolpath plan(const io::VectorDrawing& drawing, const MachineSettings& settings, const CornerPolicy& policy,
              const MachineLimits& limits = {}, const SettingCalibration& calibration = {});

struct Estimate {
  double print_time_s = 0.0;
  double ink_volume_mm3 = 0.0;
};

/// Time is segment length / speed plus a dwell per Tap and per Lift;
/// volume integrates the process flux over each segment's duration.
Estimate estimate(const Toolpath& toolpath, const ProcessModel& process, double dwell_s = 0.1);

}  // namespace lmprint::plan
