#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lmprint/core_model.hpp"

namespace lmprint::contact {

struct ContactLoad {
  double force_n = 0.0;
  double normal_angle_rad = 0.0;      // between the force and the surface normal
  double tangential_angle_rad = 0.0;  // drives the rolling creep

  void validate() const;
};

struct ContactSolution {
  double indentation_depth = 0.0;  // m
  double contact_radius = 0.0;     // m
  double contact_area = 0.0;       // m^2
};

/// Rolling creep of the bead. `creep` is signed: negative means the bead
/// surface lags the head translation. `sr` and `fr` are the normalised
/// creep and tangential-force ratio.
struct SlidingState {
  double creep = 0.0;
  double sr = 0.0;
  double fr = 0.0;
};

enum class HertzForm {
  Physical,        // (1 - nu^2) / E compliance
  LiteralPrinted,  // E and (1 - nu^2) swapped
};

ContactSolution indentation(const ContactLoad& load, const BeadGeometry& bead,
                            const SubstrateProperties& substrate,
                            HertzForm form = HertzForm::Physical);

/// Normal pressure at radius r inside the contact disc. Throws OutOfContact
/// for r > a.
double contact_pressure(const ContactSolution& solution, const ContactLoad& load,
                        double radial_position);

/// Throws FullSlip when tan(tangential angle) exceeds the friction coefficient.
SlidingState sliding_ratio(const ContactLoad& load, const SubstrateProperties& substrate,
                           const ContactSolution& solution, const BeadGeometry& bead);

/// Sr = 1 - (1 - Fr)^(1/3) for Fr in [0, 1].
double sr_from_fr(double fr);

std::vector<std::pair<double, double>> sr_fr_curve(std::span<const double> fr_samples);

enum class SlipVerdict { NoSlip, Slip };

SlipVerdict static_slip_check(const ContactLoad& load, const SubstrateProperties& substrate);

}  // namespace lmprint::contact
