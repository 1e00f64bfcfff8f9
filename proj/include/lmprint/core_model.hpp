#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lmprint {

/// Physical constants of the liquid-metal ink.
struct InkProperties {
  std::string name;
  double density = 0.0;                 // kg/m^3
  double kinematic_viscosity = 0.0;     // m^2/s
  double surface_tension_lm_air = 0.0;  // N/m
  double melting_point = 0.0;           // degC

  /// Eutectic gallium-indium (75.5:24.5) preset.
  static InkProperties gain24_5();
  void validate() const;

  friend bool operator==(const InkProperties&, const InkProperties&) = default;
};

/// One node of a measured contact-angle curve.
struct AngleNode {
  double force_n = 0.0;
  double angle_deg = 0.0;

  friend bool operator==(const AngleNode&, const AngleNode&) = default;
};

struct SubstrateProperties {
  std::string name;
  double youngs_modulus = 0.0;        // Pa
  double poisson_ratio = 0.0;
  double friction_coefficient = 0.0;
  double gamma_sub_air = 0.0;         // N/m
  double gamma_sub_lm = 0.0;          // N/m
  std::vector<AngleNode> angle_table; // force strictly increasing, angle strictly decreasing

  void validate() const;

  friend bool operator==(const SubstrateProperties&, const SubstrateProperties&) = default;
};

/// Shipped substrate presets: PVC film, stainless steel, office paper.
///
/// The angle tables honour only the qualitative facts known about these
/// materials (non-wetting at zero load, PVC wetting at 0.1 N, PVC < steel <
/// paper at 0.2 N). Interior values are illustrative, not measurements.
std::vector<SubstrateProperties> default_substrates();

/// Looks a substrate up by name; throws Error(InvalidInput) when absent.
const SubstrateProperties& find_substrate(const std::vector<SubstrateProperties>& db,
                                          const std::string& name);

struct BeadGeometry {
  double bead_radius = 0.0;         // m
  double gap_width = 0.0;           // m
  double channel_width_eff = 0.0;   // m, unrolled gap width across the flow
  double channel_length_eff = 0.0;  // m, unrolled gap length along the flow

  /// Effective channel: a quarter of the bead circumference wide, one radius long.
  static BeadGeometry with_defaults(double bead_radius, double gap_width);
  /// 700 um bead with a 50 um gap.
  static BeadGeometry standard();
  void validate() const;

  friend bool operator==(const BeadGeometry&, const BeadGeometry&) = default;
};

/// Raw machine dial values (dimensionless).
struct MachineSettings {
  double speed_setting = 0.0;
  double pressure_setting = 0.0;

  friend bool operator==(const MachineSettings&, const MachineSettings&) = default;
};

struct MachineLimits {
  double max_speed_mm_s = 400.0;
  double preferred_max_speed_mm_s = 200.0;
  double max_pressure_g = 800.0;

  void validate() const;

  friend bool operator==(const MachineLimits&, const MachineLimits&) = default;
};

struct ContactForce {
  double grams = 0.0;
  double newtons = 0.0;
};

/// Maps dial settings to physical units. Speed is linear through the origin
/// and one anchor; pressure is piecewise linear through the origin and the
/// given anchors, extrapolating the last slope.
class SettingCalibration {
 public:
  /// Anchors: speed 30 -> 120 mm/s, pressure 60 -> 188 g.
  SettingCalibration();
  SettingCalibration(std::pair<double, double> speed_anchor,
                     std::vector<std::pair<double, double>> pressure_anchors);

  double speed_to_velocity_mm_s(double setting) const;
  double velocity_to_speed_setting(double velocity_mm_s) const;
  ContactForce pressure_to_force(double setting) const;

  const std::pair<double, double>& speed_anchor() const { return speed_anchor_; }
  const std::vector<std::pair<double, double>>& pressure_anchors() const { return pressure_anchors_; }

 private:
  std::pair<double, double> speed_anchor_;
  std::vector<std::pair<double, double>> pressure_anchors_;  // includes the origin
};

double speed_setting_to_velocity(double setting, const SettingCalibration& cal = {});
ContactForce pressure_setting_to_force(double setting, const SettingCalibration& cal = {});

/// Pa*s.
double dynamic_viscosity(const InkProperties& ink);

enum class VerdictStatus { Ok, QualityWarning, Violation };

struct SettingsVerdict {
  VerdictStatus status = VerdictStatus::Ok;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;

  bool acceptable() const { return status != VerdictStatus::Violation; }
};

/// Checks physical speed (mm/s) and pressure (g) against the machine range.
SettingsVerdict validate_motion(double speed_mm_s, double pressure_g, const MachineLimits& limits);

SettingsVerdict validate_settings(const MachineSettings& settings, const MachineLimits& limits,
                                  const SettingCalibration& cal = {});

}  // namespace lmprint
