#include "lmprint/contact_mechanics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lmprint/error.hpp"

namespace lmprint::contact {

void ContactLoad::validate() const {
  if (!std::isfinite(force_n) || force_n < 0.0) throw Error(ErrorKind::InvalidInput, "contact force must be >= 0");
  if (!(normal_angle_rad >= 0.0 && normal_angle_rad < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidInput, "normal angle must lie in [0, pi/2)");
  }
  if (!std::isfinite(tangential_angle_rad)) throw Error(ErrorKind::InvalidInput, "tangential angle must be finite");
}

ContactSolution indentation(const ContactLoad& load, const BeadGeometry& bead,
                            const SubstrateProperties& substrate, HertzForm form) {
  load.validate();
  bead.validate();
  substrate.validate();
  if (load.force_n == 0.0) return {};

  const double radius = bead.bead_radius;
  const double compliance = 1.0 - substrate.poisson_ratio * substrate.poisson_ratio;
  const double normal_force = load.force_n * std::cos(load.normal_angle_rad);
  const double base = form == HertzForm::Physical
                          ? 3.0 * compliance * normal_force / (4.0 * substrate.youngs_modulus * std::sqrt(radius))
                          : 3.0 * substrate.youngs_modulus * normal_force / (4.0 * compliance * std::sqrt(radius));

  ContactSolution solution;
  solution.indentation_depth = std::pow(base, 2.0 / 3.0);
  solution.contact_radius = std::sqrt(radius * solution.indentation_depth);
  solution.contact_area = std::numbers::pi * solution.contact_radius * solution.contact_radius;
  return solution;
}

double contact_pressure(const ContactSolution& solution, const ContactLoad& load, double radial_position) {
  load.validate();
  const double a = solution.contact_radius;
  if (!(radial_position >= 0.0)) throw Error(ErrorKind::InvalidInput, "radial position must be >= 0");
  if (radial_position > a) {
    std::ostringstream msg;
    msg << "r = " << radial_position << " m lies outside the contact radius " << a << " m";
    throw Error(ErrorKind::OutOfContact, msg.str());
  }
  if (a == 0.0) return 0.0;
  const double ratio = radial_position / a;
  const double peak = 3.0 * std::cos(load.normal_angle_rad) * load.force_n / (2.0 * std::numbers::pi * a * a);
  return peak * std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

double sr_from_fr(double fr) {
  if (!(fr >= 0.0 && fr <= 1.0)) {
    std::ostringstream msg;
    msg << "force ratio " << fr << " lies outside [0, 1]";
    throw Error(ErrorKind::Domain, msg.str());
  }
  return 1.0 - std::cbrt(1.0 - fr);
}

namespace {

bool exceeds_friction(double tangent, double mu) { return tangent > mu * (1.0 + 1e-12); }

}  // namespace

SlidingState sliding_ratio(const ContactLoad& load, const SubstrateProperties& substrate,
                           const ContactSolution& solution, const BeadGeometry& bead) {
  load.validate();
  substrate.validate();
  bead.validate();
  const double tangent = std::tan(load.tangential_angle_rad);
  const double mu = substrate.friction_coefficient;
  if (tangent < 0.0) throw Error(ErrorKind::Domain, "tangential angle must give tan >= 0");
  if (exceeds_friction(tangent, mu)) {
    std::ostringstream msg;
    msg << "tan(theta) = " << tangent << " exceeds friction coefficient " << mu;
    throw Error(ErrorKind::FullSlip, msg.str());
  }
  const double nu = substrate.poisson_ratio;
  SlidingState state;
  state.fr = std::min(1.0, tangent / mu);
  state.sr = sr_from_fr(state.fr);
  const double scale = (4.0 - 3.0 * nu) / (4.0 * (1.0 - nu)) * mu * solution.contact_radius / bead.bead_radius;
  state.creep = -scale * state.sr;
  return state;
}

std::vector<std::pair<double, double>> sr_fr_curve(std::span<const double> fr_samples) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(fr_samples.size());
  for (double fr : fr_samples) curve.emplace_back(fr, sr_from_fr(fr));
  return curve;
}

SlipVerdict static_slip_check(const ContactLoad& load, const SubstrateProperties& substrate) {
  load.validate();
  return exceeds_friction(std::tan(load.normal_angle_rad), substrate.friction_coefficient) ? SlipVerdict::Slip
                                                                                         : SlipVerdict::NoSlip;
}

}  // namespace lmprint::contact
