#pragma once

#include <optional>

#include "lmprint/contact_mechanics.hpp"
#include "lmprint/core_model.hpp"
#include "lmprint/ink_flow.hpp"

namespace lmprint::plan {

/// Physics of one drawing segment at given head settings.
struct ProcessPoint {
  double force_n = 0.0;
  contact::ContactSolution contact;
  double creep = 0.0;       // signed; -1 under full slip (no rolling)
  bool full_slip = false;
  double omega_y_rad_s = 0.0;
  double flux_m3_s = 0.0;
};

/// Everything needed to turn (speed, pressure) into an ink flux. Shared by
/// the planner's estimate and the simulator.
struct ProcessModel {
  InkProperties ink = InkProperties::gain24_5();
  SubstrateProperties substrate;
  BeadGeometry bead = BeadGeometry::standard();
  flow::FluxModelParams flux;
  double drive_pressure_pa = 1.0;
  double normal_angle_rad = 0.0;
  double tangential_angle_rad = 0.0;
  contact::HertzForm hertz_form = contact::HertzForm::Physical;
  /// Fixed transverse bead rotation; unset means near-rolling V (1 - |s|) / R.
  std::optional<double> fixed_omega_y_rad_s;

  ProcessPoint evaluate(double speed_mm_s, double pressure_g) const;
};

}  // namespace lmprint::plan
