#pragma once

#include <span>
#include <string>
#include <vector>

#include "lmprint/core_model.hpp"

namespace lmprint::wetting {

struct SurfaceTensionTriple {
  double gamma_sub_air = 0.0;
  double gamma_sub_lm = 0.0;
  double gamma_lm_air = 0.0;
};

struct LineEstimate {
  double width_m = 0.0;
  double cross_section_area_m2 = 0.0;
  double contact_angle_rad = 0.0;
  bool continuity_limit = false;  // set when theta == pi and the width is the limit value 0
};

/// Ink wettability on the substrate versus on the bead.
struct BeadWettingPair {
  double gamma_sub_lm = 0.0;
  double gamma_bead_lm = 0.0;
};

/// Equilibrium contact angle in radians, [0, pi]. Throws NoEquilibrium when
/// the cosine falls outside [-1, 1].
double young_contact_angle(const SurfaceTensionTriple& t);

/// 2 sin(theta) / sqrt(theta - sin(theta) cos(theta)).
double line_shape_factor(double theta_rad);

/// Equilibrium width of a deposited line of cross-section Q / V_s.
LineEstimate stable_line_width(double theta_rad, double flux_m3_s, double print_speed_m_s);

struct AngleLookup {
  double angle_deg = 0.0;
  bool clamped = false;  // force was outside the table range
};

AngleLookup angle_at_force(const SubstrateProperties& substrate, double applied_force_n);

/// Substrate names, best-wetting (smallest angle) first; ties by name.
std::vector<std::string> wettability_ranking(std::span<const SubstrateProperties> substrates,
                                             double applied_force_n);

/// True iff the ink prefers the substrate over the bead.
bool deposition_feasible(const BeadWettingPair& pair);

}  // namespace lmprint::wetting
