#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmprint/circuit_check.hpp"
#include "lmprint/core_model.hpp"
#include "lmprint/planner.hpp"
#include "lmprint/print_sim.hpp"

namespace lmprint {

struct CircuitRules {
  double touch_tolerance_mm = 0.0;
  double min_width_mm = 0.1;
  double min_clearance_mm = 0.1;
  std::optional<double> resistivity_ohm_m;  // no default: must come from the user
};

/// Everything a run needs. Every section is optional in the file; absent
/// sections take the defaults below. Unknown keys are rejected.
struct ProjectConfig {
  InkProperties ink = InkProperties::gain24_5();
  std::vector<SubstrateProperties> substrates = default_substrates();
  std::string substrate = "PVC film";
  BeadGeometry bead = BeadGeometry::standard();
  MachineLimits limits;
  SettingCalibration calibration;
  MachineSettings settings{30.0, 60.0};
  std::optional<flow::FluxModelParams> flux;  // unset: calibrate on the reference anchor
  double drive_pressure_pa = 1.0;
  double normal_angle_deg = 0.0;
  double tangential_angle_deg = 0.0;
  contact::HertzForm hertz_form = contact::HertzForm::Physical;
  std::optional<double> fixed_omega_y_rad_s;
  double dwell_s = 0.1;
  double slip_limit = 0.05;
  sim::WidthSource width_source = sim::WidthSource::Physics;
  std::optional<sim::EmpiricalWidthModel> empirical_width;
  plan::CornerPolicy corner_policy;
  sim::RasterOptions raster;
  double flatten_tolerance_mm = 0.05;
  CircuitRules circuit;

  /// Validates cross-references (substrate name, ranges); throws Config.
  void validate() const;
  const SubstrateProperties& selected_substrate() const;
  flow::FluxModelParams flux_params() const;
  plan::ProcessModel process_model() const;
  sim::SimulationEnvironment simulation_environment() const;
};

ProjectConfig parse_config(std::string_view json_text);
ProjectConfig load_config(const std::string& path);
std::string config_to_json(const ProjectConfig& config);

/// Substrate database file: {"substrates": [ ... ]}.
std::vector<SubstrateProperties> parse_substrate_db(std::string_view json_text);
std::string substrate_db_to_json(const std::vector<SubstrateProperties>& db);

}  // namespace lmprint
