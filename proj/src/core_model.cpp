#include "lmprint/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lmprint/error.hpp"
#include "lmprint/units.hpp"

namespace lmprint {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSetting: return "invalid-setting";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::OutOfContact: return "out-of-contact";
    case ErrorKind::FullSlip: return "full-slip";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Calibration: return "calibration";
    case ErrorKind::Unidentifiable: return "unidentifiable";
    case ErrorKind::NoEquilibrium: return "no-equilibrium";
    case ErrorKind::NoData: return "no-data";
    case ErrorKind::Malformed: return "malformed";
    case ErrorKind::UnsupportedSvg: return "unsupported-svg";
    case ErrorKind::NonVector: return "non-vector";
    case ErrorKind::IllegalAction: return "illegal-action";
    case ErrorKind::ImageTooLarge: return "image-too-large";
    case ErrorKind::UnknownPad: return "unknown-pad";
    case ErrorKind::PadNotOnNet: return "pad-not-on-net";
    case ErrorKind::Disconnected: return "disconnected";
    case ErrorKind::ZeroArea: return "zero-area";
    case ErrorKind::PlanRefused: return "plan-refused";
    case ErrorKind::Io: return "io";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

namespace {

void require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorKind::InvalidInput, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

InkProperties InkProperties::gain24_5() {
  return {"GaIn24.5", 6280.0, 2.7e-7, 0.624, 15.5};
}

void InkProperties::validate() const {
  require(finite_positive(density), "ink density must be > 0");
  require(finite_positive(kinematic_viscosity), "ink kinematic viscosity must be > 0");
  require(finite_positive(surface_tension_lm_air), "ink surface tension must be > 0");
}

void SubstrateProperties::validate() const {
  const std::string who = "substrate '" + name + "': ";
  require(finite_positive(youngs_modulus), who + "Young's modulus must be > 0");
  require(poisson_ratio > 0.0 && poisson_ratio < 0.5, who + "Poisson ratio must lie in (0, 0.5)");
  require(finite_positive(friction_coefficient), who + "friction coefficient must be > 0");
  require(std::isfinite(gamma_sub_air) && std::isfinite(gamma_sub_lm), who + "surface energies must be finite");
  for (std::size_t i = 0; i < angle_table.size(); ++i) {
    const auto& node = angle_table[i];
    require(std::isfinite(node.force_n) && node.force_n >= 0.0, who + "angle table forces must be >= 0");
    require(node.angle_deg > 0.0 && node.angle_deg < 180.0, who + "angle table angles must lie in (0, 180)");
    if (i > 0) {
      require(node.force_n > angle_table[i - 1].force_n, who + "angle table forces must strictly increase");
      require(node.angle_deg < angle_table[i - 1].angle_deg, who + "angle table angles must strictly decrease");
    }
  }
}

std::vector<SubstrateProperties> default_substrates() {
  // Mechanical constants are handbook-order values; surface energies and the
  // angle tables are illustrative.
  return {
      {"PVC film", 3.0e9, 0.40, 0.40, 0.040, 0.035,
       {{0.00, 135.0}, {0.05, 112.0}, {0.10, 86.0}, {0.15, 64.0}, {0.20, 48.0}}},
      {"stainless steel", 193.0e9, 0.29, 0.50, 0.045, 0.030,
       {{0.00, 140.0}, {0.05, 130.0}, {0.10, 120.0}, {0.15, 110.0}, {0.20, 100.0}}},
      {"office paper", 4.0e9, 0.30, 0.45, 0.030, 0.040,
       {{0.00, 142.0}, {0.05, 139.0}, {0.10, 136.0}, {0.15, 133.0}, {0.20, 130.0}}},
  };
}

const SubstrateProperties& find_substrate(const std::vector<SubstrateProperties>& db,
                                          const std::string& name) {
  auto it = std::find_if(db.begin(), db.end(), [&](const auto& s) { return s.name == name; });
  if (it == db.end()) throw Error(ErrorKind::InvalidInput, "unknown substrate '" + name + "'");
  return *it;
}

BeadGeometry BeadGeometry::with_defaults(double bead_radius, double gap_width) {
  return {bead_radius, gap_width, 2.0 * std::numbers::pi * bead_radius * 0.25, bead_radius};
}

BeadGeometry BeadGeometry::standard() { return with_defaults(350e-6, 50e-6); }

void BeadGeometry::validate() const {
  require(finite_positive(bead_radius), "bead radius must be > 0");
  require(std::isfinite(gap_width) && gap_width >= 0.0 && gap_width < bead_radius,
          "gap width must lie in [0, bead radius)");
  require(finite_positive(channel_width_eff), "effective channel width must be > 0");
  require(finite_positive(channel_length_eff), "effective channel length must be > 0");
}

void MachineLimits::validate() const {
  require(finite_positive(preferred_max_speed_mm_s) && preferred_max_speed_mm_s <= max_speed_mm_s,
          "limits need 0 < preferred_max_speed <= max_speed");
  require(finite_positive(max_pressure_g), "max pressure must be > 0");
}

SettingCalibration::SettingCalibration() : SettingCalibration({30.0, 120.0}, {{60.0, 188.0}}) {}

SettingCalibration::SettingCalibration(std::pair<double, double> speed_anchor,
                                       std::vector<std::pair<double, double>> pressure_anchors)
    : speed_anchor_(speed_anchor) {
  require(finite_positive(speed_anchor.first) && finite_positive(speed_anchor.second),
          "speed anchor must be positive");
  std::sort(pressure_anchors.begin(), pressure_anchors.end());
  pressure_anchors_.emplace_back(0.0, 0.0);
  for (const auto& [setting, grams] : pressure_anchors) {
    require(finite_positive(setting) && std::isfinite(grams), "pressure anchors need positive settings");
    require(setting > pressure_anchors_.back().first, "pressure anchor settings must be distinct");
    require(grams >= pressure_anchors_.back().second, "pressure anchors must be non-decreasing");
    pressure_anchors_.emplace_back(setting, grams);
  }
  require(pressure_anchors_.size() >= 2, "at least one pressure anchor is required");
}

namespace {

void check_setting(double setting, const char* what) {
  if (!std::isfinite(setting) || setting < 0.0) {
    std::ostringstream msg;
    msg << what << " setting must be >= 0, got " << setting;
    throw Error(ErrorKind::InvalidSetting, msg.str());
  }
}

}  // namespace

double SettingCalibration::speed_to_velocity_mm_s(double setting) const {
  check_setting(setting, "speed");
  return speed_anchor_.second * (setting / speed_anchor_.first);
}

double SettingCalibration::velocity_to_speed_setting(double velocity_mm_s) const {
  check_setting(velocity_mm_s, "velocity");
  return speed_anchor_.first * (velocity_mm_s / speed_anchor_.second);
}

ContactForce SettingCalibration::pressure_to_force(double setting) const {
  check_setting(setting, "pressure");
  std::size_t hi = 1;
  while (hi + 1 < pressure_anchors_.size() && setting > pressure_anchors_[hi].first) ++hi;
  const auto [s0, g0] = pressure_anchors_[hi - 1];
  const auto [s1, g1] = pressure_anchors_[hi];
  const double grams = g0 + (g1 - g0) * ((setting - s0) / (s1 - s0));
  return {grams, units::grams_to_newtons(grams)};
}

double speed_setting_to_velocity(double setting, const SettingCalibration& cal) {
  return cal.speed_to_velocity_mm_s(setting);
}

ContactForce pressure_setting_to_force(double setting, const SettingCalibration& cal) {
  return cal.pressure_to_force(setting);
}

double dynamic_viscosity(const InkProperties& ink) {
  ink.validate();
  return ink.density * ink.kinematic_viscosity;
}

SettingsVerdict validate_motion(double speed_mm_s, double pressure_g, const MachineLimits& limits) {
  limits.validate();
  SettingsVerdict verdict;
  auto fmt = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  if (!std::isfinite(speed_mm_s) || speed_mm_s < 0.0) {
    verdict.violations.push_back("speed " + fmt(speed_mm_s) + " mm/s is negative or not finite");
  } else if (speed_mm_s > limits.max_speed_mm_s) {
    verdict.violations.push_back("speed " + fmt(speed_mm_s) + " mm/s exceeds the machine maximum " +
                                 fmt(limits.max_speed_mm_s) + " mm/s");
  } else if (speed_mm_s > limits.preferred_max_speed_mm_s) {
    verdict.warnings.push_back("speed " + fmt(speed_mm_s) + " mm/s is above the preferred maximum " +
                               fmt(limits.preferred_max_speed_mm_s) + " mm/s; print quality degrades");
  }
  if (!std::isfinite(pressure_g) || pressure_g < 0.0) {
    verdict.violations.push_back("pressure " + fmt(pressure_g) + " g is negative or not finite");
  } else if (pressure_g > limits.max_pressure_g) {
    verdict.violations.push_back("pressure " + fmt(pressure_g) + " g exceeds the machine maximum " +
                                 fmt(limits.max_pressure_g) + " g");
  }
  if (!verdict.violations.empty()) {
    verdict.status = VerdictStatus::Violation;
  } else if (!verdict.warnings.empty()) {
    verdict.status = VerdictStatus::QualityWarning;
  }
  return verdict;
}

SettingsVerdict validate_settings(const MachineSettings& settings, const MachineLimits& limits,
                                  const SettingCalibration& cal) {
  double speed = settings.speed_setting;
  double grams = settings.pressure_setting;
  if (std::isfinite(speed) && speed >= 0.0) speed = cal.speed_to_velocity_mm_s(speed);
  if (std::isfinite(grams) && grams >= 0.0) grams = cal.pressure_to_force(grams).grams;
  return validate_motion(speed, grams, limits);
}

}  // namespace lmprint
