#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lmprint/core_model.hpp"

namespace lmprint::flow {

struct FlowConditions {
  double pressure_drop_pa = 0.0;                     // P_in - P_out
  std::array<double, 3> rotation_rad_s{0.0, 0.0, 0.0};  // about x, y (transverse), z
  double head_velocity_m_s = 0.0;

  void validate() const;
};

/// Gains on the Poiseuille (pressure) and Couette (drag) terms of the
/// unrolled gap channel.
struct FluxModelParams {
  double kappa_pressure = 0.0;
  double kappa_couette = 0.0;

  void validate() const;
  friend bool operator==(const FluxModelParams&, const FluxModelParams&) = default;
};

/// The two flux terms evaluated with unit gains, m^3/s.
struct FluxBasis {
  double pressure = 0.0;
  double couette = 0.0;
};

FluxBasis flux_basis(const BeadGeometry& bead, const FlowConditions& cond, const InkProperties& ink);

/// Volumetric flux through the bead/seat gap, m^3/s.
///
///   Q = kp * w * GW^3 * dP / (12 mu l) + kc * w * GW * |wy| * R / 2
///
/// Only rotation about the transverse axis drags ink through the gap.
double gap_flux(const BeadGeometry& bead, const FlowConditions& cond, const FluxModelParams& params,
                const InkProperties& ink);

struct FluxObservation {
  FlowConditions conditions;
  BeadGeometry bead;
  double flux_m3_s = 0.0;
};

struct FluxCalibration {
  FluxModelParams params;
  double residual_m3_s = 0.0;  // Euclidean norm of the fit residuals
  bool rank_deficient = false;
};

/// Non-negative least squares over (kappa_pressure, kappa_couette). When the
/// data cannot separate the two terms (e.g. a single observation) the
/// minimum-norm solution is returned, which loads the dominant term.
FluxCalibration calibrate_flux(std::span<const FluxObservation> observations, const InkProperties& ink);

/// dP = 1 Pa, wy = 60 rad/s, GW = 50 um, V = 40 mm/s, Q = 0.0656 mm^3/s
/// on the standard bead.
FluxObservation reference_anchor();

/// Gains calibrated on reference_anchor() with the given ink.
FluxModelParams default_flux_params(const InkProperties& ink);

/// Row-major table: rows follow pressures, columns follow gap widths.
struct FluxTable {
  std::vector<double> pressures_pa;
  std::vector<double> gap_widths_m;
  std::vector<double> flux_m3_s;

  double at(std::size_t row, std::size_t col) const { return flux_m3_s[row * gap_widths_m.size() + col]; }
};

FluxTable flux_table(std::span<const double> pressures_pa, std::span<const double> gap_widths_m,
                     const FlowConditions& cond_template, const FluxModelParams& params,
                     const BeadGeometry& bead, const InkProperties& ink);

/// Deposited cross-section A = Q / V_s (m^2). Throws Domain for V_s <= 0.
double cross_section_area(double flux_m3_s, double print_speed_m_s);

}  // namespace lmprint::flow
