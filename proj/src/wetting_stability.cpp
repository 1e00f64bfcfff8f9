#include "lmprint/wetting_stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lmprint/error.hpp"

namespace lmprint::wetting {

double young_contact_angle(const SurfaceTensionTriple& t) {
  if (!(t.gamma_lm_air > 0.0)) throw Error(ErrorKind::InvalidInput, "liquid/air surface tension must be > 0");
  const double cosine = (t.gamma_sub_air - t.gamma_sub_lm) / t.gamma_lm_air;
  if (!(cosine >= -1.0 && cosine <= 1.0)) {
    std::ostringstream msg;
    msg << "cos(theta) = " << cosine << " has no equilibrium angle ("
        << (cosine > 1.0 ? "complete wetting" : "complete dewetting") << ")";
    throw Error(ErrorKind::NoEquilibrium, msg.str());
  }
  return std::acos(cosine);
}

namespace {

// theta - sin(theta) cos(theta) = (x - sin x) / 2 with x = 2 theta; series for small x.
double shape_radicand(double theta) {
  const double x = 2.0 * theta;
  if (x < 0.1) {
    const double x2 = x * x;
    double term = x * x2 / 6.0;
    double sum = term;
    for (int k = 2; k <= 7; ++k) {
      term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
    }
    return sum / 2.0;
  }
  return (x - std::sin(x)) / 2.0;
}

}  // namespace

double line_shape_factor(double theta_rad) {
  if (!(theta_rad > 0.0 && theta_rad <= std::numbers::pi)) {
    throw Error(ErrorKind::Domain, "contact angle must lie in (0, pi]");
  }
  if (theta_rad == std::numbers::pi) return 0.0;
  return 2.0 * std::sin(theta_rad) / std::sqrt(shape_radicand(theta_rad));
}

LineEstimate stable_line_width(double theta_rad, double flux_m3_s, double print_speed_m_s) {
  if (!(theta_rad > 0.0 && theta_rad <= std::numbers::pi)) {
    std::ostringstream msg;
    msg << "contact angle " << theta_rad << " rad lies outside (0, pi)";
    throw Error(ErrorKind::Domain, msg.str());
  }
  if (!(print_speed_m_s > 0.0) || !std::isfinite(print_speed_m_s)) {
    throw Error(ErrorKind::Domain, "print speed must be > 0");
  }
  if (!(flux_m3_s >= 0.0) || !std::isfinite(flux_m3_s)) throw Error(ErrorKind::Domain, "flux must be >= 0");

  LineEstimate line;
  line.contact_angle_rad = theta_rad;
  line.cross_section_area_m2 = flux_m3_s / print_speed_m_s;
  if (theta_rad == std::numbers::pi) {
    line.continuity_limit = true;
    line.width_m = 0.0;
    return line;
  }
  line.width_m = line_shape_factor(theta_rad) * std::sqrt(line.cross_section_area_m2);
  return line;
}

AngleLookup angle_at_force(const SubstrateProperties& substrate, double applied_force_n) {
  const auto& table = substrate.angle_table;
  if (table.empty()) throw Error(ErrorKind::NoData, "substrate '" + substrate.name + "' has no angle table");
  if (!std::isfinite(applied_force_n)) throw Error(ErrorKind::InvalidInput, "force must be finite");

  if (applied_force_n <= table.front().force_n) {
    return {table.front().angle_deg, applied_force_n < table.front().force_n};
  }
  if (applied_force_n >= table.back().force_n) {
    return {table.back().angle_deg, applied_force_n > table.back().force_n};
  }
  auto hi = std::upper_bound(table.begin(), table.end(), applied_force_n,
                             [](double f, const AngleNode& n) { return f < n.force_n; });
  auto lo = hi - 1;
  const double t = (applied_force_n - lo->force_n) / (hi->force_n - lo->force_n);
  return {lo->angle_deg + t * (hi->angle_deg - lo->angle_deg), false};
}

std::vector<std::string> wettability_ranking(std::span<const SubstrateProperties> substrates,
                                             double applied_force_n) {
  std::vector<std::pair<double, std::string>> keyed;
  keyed.reserve(substrates.size());
  for (const auto& s : substrates) keyed.emplace_back(angle_at_force(s, applied_force_n).angle_deg, s.name);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> names;
  names.reserve(keyed.size());
  for (auto& [angle, name] : keyed) names.push_back(std::move(name));
  return names;
}

bool deposition_feasible(const BeadWettingPair& pair) { return pair.gamma_sub_lm < pair.gamma_bead_lm; }

}  // namespace lmprint::wetting
