#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmprint/pattern_io.hpp"
#include "lmprint/planner.hpp"

namespace lmprint::sim {

enum class HeadState { Sealed, Tapped, Drawing, Lifted };

const char* to_string(HeadState s);

/// Sealed -> Tapped -> Drawing (-> Drawing) -> Lifted -> Tapped ...
/// Throws IllegalAction otherwise; a sealed or lifted bead cannot dispense.
HeadState step_head(HeadState state, const plan::Action& action);

enum RiskFlag : std::uint8_t {
  kCornerRisk = 1u << 0,
  kSlipRisk = 1u << 1,
  kSpeedWarning = 1u << 2,
};

std::vector<std::string> flag_names(std::uint8_t flags);

struct TraceSegment {
  Point2 start;  // mm
  Point2 end;    // mm
  double width_m = 0.0;
  double flux_m3_s = 0.0;
  double creep = 0.0;
  double area_m2 = 0.0;
  double speed_mm_s = 0.0;
  double pressure_g = 0.0;
  double duration_s = 0.0;
  double contact_angle_deg = 0.0;
  std::optional<double> alternate_width_m;  // the width source not selected, when available
  std::uint8_t flags = 0;
  std::size_t run = 0;  // index of the Tap..Lift run the segment belongs to

  double length_mm() const { return distance(start, end); }
  double width_mm() const { return width_m * 1e3; }
};

struct DepositedTrace {
  std::vector<TraceSegment> segments;
};

/// w(v, F) = a * F^b / v^c with v in mm/s, F in grams, w in metres.
struct EmpiricalWidthModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double residual = 0.0;  // RMS log-space residual

  double width_m(double speed_mm_s, double pressure_g) const;
};

struct WidthSample {
  double speed_mm_s = 0.0;
  double pressure_g = 0.0;
  double width_m = 0.0;
};

/// Log-space least squares with b, c >= 0. Throws Unidentifiable for
/// degenerate sets and when the data do not decrease with speed.
EmpiricalWidthModel fit_width_model(std::span<const WidthSample> samples);

enum class WidthSource { Physics, Empirical };

struct SimulationEnvironment {
  plan::ProcessModel process;
  plan::CornerPolicy policy;
  MachineLimits limits;
  double slip_limit = 0.05;
  double dwell_s = 0.1;
  WidthSource width_source = WidthSource::Physics;
  std::optional<EmpiricalWidthModel> empirical;
};

struct SimulationTotals {
  std::size_t segments = 0;
  std::size_t runs = 0;
  double print_time_s = 0.0;
  double ink_volume_mm3 = 0.0;
  double printed_length_mm = 0.0;
  std::size_t corner_risks = 0;
  std::size_t slip_risks = 0;
  std::size_t speed_warnings = 0;
  std::size_t clamped_angle_lookups = 0;
  std::optional<double> max_width_discrepancy_rel;  // |physics - empirical| / physics
};

struct SimulationResult {
  DepositedTrace trace;
  SimulationTotals totals;
  std::vector<std::string> warnings;
};

SimulationResult simulate(const plan::Toolpath& toolpath, const SimulationEnvironment& env);

struct RasterOptions {
  double scale_mm_per_px = 0.02;
  std::size_t max_pixels = 100'000'000;
  double margin_mm = 0.5;
};

/// Each segment stroked at its width with round caps; binary 255/0 occupancy.
io::RasterImage rasterize(const DepositedTrace& trace, const RasterOptions& options);

/// Pixel count covered by a single segment's stroke at the given scale.
std::size_t segment_pixel_count(const TraceSegment& segment, double scale_mm_per_px);

/// Rasterized stroke area times the uniform thickness A / w, mm^3. Within a
/// run each pixel counts once, at the thickness of its nearest segment;
/// separate runs add. Round caps add pi*w*A/4 per run end pair.
double rasterized_volume_mm3(const DepositedTrace& trace, double scale_mm_per_px);

/// Scale no coarser than `preview_scale` that puts at least `min_px_across`
/// pixels across the narrowest segment.
double volume_check_scale(const DepositedTrace& trace, double preview_scale, double min_px_across = 64.0);

}  // namespace lmprint::sim
