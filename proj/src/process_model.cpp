#include "lmprint/process_model.hpp"

#include <algorithm>
#include <cmath>

#include "lmprint/error.hpp"
#include "lmprint/units.hpp"

namespace lmprint::plan {

ProcessPoint ProcessModel::evaluate(double speed_mm_s, double pressure_g) const {
  if (!(speed_mm_s > 0.0) || !std::isfinite(speed_mm_s)) {
    throw Error(ErrorKind::Domain, "segment speed must be > 0");
  }
  ProcessPoint point;
  point.force_n = units::grams_to_newtons(pressure_g);

  const contact::ContactLoad load{point.force_n, normal_angle_rad, tangential_angle_rad};
  point.contact = contact::indentation(load, bead, substrate, hertz_form);
  try {
    point.creep = contact::sliding_ratio(load, substrate, point.contact, bead).creep;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FullSlip) throw;
    point.full_slip = true;
    point.creep = -1.0;
  }

  const double velocity = units::mm_to_m(speed_mm_s);
  if (fixed_omega_y_rad_s) {
    point.omega_y_rad_s = *fixed_omega_y_rad_s;
  } else {
    point.omega_y_rad_s = velocity * std::max(0.0, 1.0 - std::abs(point.creep)) / bead.bead_radius;
  }

  flow::FlowConditions cond;
  cond.pressure_drop_pa = drive_pressure_pa;
  cond.rotation_rad_s = {0.0, point.omega_y_rad_s, 0.0};
  cond.head_velocity_m_s = velocity;
  point.flux_m3_s = flow::gap_flux(bead, cond, flux, ink);
  return point;
}

}  // namespace lmprint::plan
