#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmprint/pattern_io.hpp"
#include "lmprint/print_sim.hpp"

namespace lmprint::circuit {

struct Net {
  std::size_t id = 0;
  std::vector<std::size_t> segments;  // ascending
  std::vector<std::string> pads;      // sorted

  friend bool operator==(const Net&, const Net&) = default;
};

/// Outline gap between two stroked segments, mm (negative when overlapping).
double outline_gap_mm(const sim::TraceSegment& a, const sim::TraceSegment& b);

bool pad_touches(const io::Pad& pad, const sim::TraceSegment& segment, double touch_tolerance_mm);

/// Connected components of segments whose outlines come within the
/// tolerance. Nets are ordered and numbered by their lowest member index.
std::vector<Net> extract_nets(const sim::DepositedTrace& trace, std::span<const io::Pad> pads,
                              double touch_tolerance_mm);

/// One bool per pair. Throws UnknownPad for names missing from `pads` and
/// PadNotOnNet for pads that touch no segment.
std::vector<bool> check_connectivity(std::span<const Net> nets, std::span<const io::Pad> pads,
                                     std::span<const std::pair<std::string, std::string>> pad_pairs);

struct ResistanceEstimate {
  double ohms = 0.0;
  bool approximate = false;  // net is branched or looped; value is the shortest series path
  std::vector<std::size_t> path_segments;
};

ResistanceEstimate estimate_resistance(const Net& net, const std::string& pad_a, const std::string& pad_b,
                                       double resistivity_ohm_m, const sim::DepositedTrace& trace,
                                       std::span<const io::Pad> pads, double touch_tolerance_mm);

enum class ViolationKind { MinWidth, ClearanceShortRisk };

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::MinWidth;
  Point2 location;  // mm
  double measured_mm = 0.0;
  double limit_mm = 0.0;
  std::vector<std::size_t> segments;
};

struct DrcResult {
  std::vector<Violation> violations;  // sorted by location, then kind

  bool passed() const { return violations.empty(); }
};

DrcResult drc(const sim::DepositedTrace& trace, double min_width_mm, double min_clearance_mm,
              std::span<const Net> nets);

}  // namespace lmprint::circuit
