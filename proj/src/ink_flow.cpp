#include "lmprint/ink_flow.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "lmprint/error.hpp"

namespace lmprint::flow {

void FlowConditions::validate() const {
  if (!std::isfinite(pressure_drop_pa) || pressure_drop_pa < 0.0) {
    throw Error(ErrorKind::InvalidInput, "pressure drop must be >= 0");
  }
  for (double w : rotation_rad_s) {
    if (!std::isfinite(w)) throw Error(ErrorKind::InvalidInput, "rotation must be finite");
  }
  if (!std::isfinite(head_velocity_m_s)) throw Error(ErrorKind::InvalidInput, "head velocity must be finite");
}

void FluxModelParams::validate() const {
  if (!(kappa_pressure >= 0.0) || !(kappa_couette >= 0.0) || !std::isfinite(kappa_pressure) ||
      !std::isfinite(kappa_couette)) {
    throw Error(ErrorKind::InvalidInput, "flux gains must be finite and >= 0");
  }
}

FluxBasis flux_basis(const BeadGeometry& bead, const FlowConditions& cond, const InkProperties& ink) {
  bead.validate();
  cond.validate();
  const double mu = dynamic_viscosity(ink);
  const double gap = bead.gap_width;
  const double width = bead.channel_width_eff;
  FluxBasis basis;
  basis.pressure = width * gap * gap * gap * cond.pressure_drop_pa / (12.0 * mu * bead.channel_length_eff);
  basis.couette = width * gap * std::abs(cond.rotation_rad_s[1]) * bead.bead_radius / 2.0;
  return basis;
}

double gap_flux(const BeadGeometry& bead, const FlowConditions& cond, const FluxModelParams& params,
                const InkProperties& ink) {
  params.validate();
  const FluxBasis basis = flux_basis(bead, cond, ink);
  return params.kappa_pressure * basis.pressure + params.kappa_couette * basis.couette;
}

namespace {

FluxModelParams fit_single(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int column) {
  const double denom = x.col(column).squaredNorm();
  const double k = denom > 0.0 ? std::max(0.0, x.col(column).dot(y) / denom) : 0.0;
  return column == 0 ? FluxModelParams{k, 0.0} : FluxModelParams{0.0, k};
}

double residual_norm(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const FluxModelParams& p) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double r = p.kappa_pressure * x(i, 0) + p.kappa_couette * x(i, 1) - y(i);
    sum += r * r;
  }
  return std::sqrt(sum);
}

/// Nudges the gains by single ulps until the forward model hits `target`
/// exactly: the dominant term is solved first, the minor term fine-tunes.
void polish_to_anchor(FluxModelParams& p, double x_pressure, double x_couette, double target) {
  auto predict = [&] { return p.kappa_pressure * x_pressure + p.kappa_couette * x_couette; };
  const bool couette_major = p.kappa_couette * x_couette >= p.kappa_pressure * x_pressure;
  double& major = couette_major ? p.kappa_couette : p.kappa_pressure;
  double& minor = couette_major ? p.kappa_pressure : p.kappa_couette;
  const double x_major = couette_major ? x_couette : x_pressure;
  const double x_minor = couette_major ? x_pressure : x_couette;
  if (!(x_major > 0.0)) return;
  major = std::max(0.0, (target - minor * x_minor) / x_major);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (minor > 0.0 && x_minor > 0.0) {
    for (int i = 0; i < 200000 && predict() != target; ++i) {
      minor = std::nextafter(minor, predict() < target ? kInf : 0.0);
    }
  }
  for (int i = 0; i < 64 && predict() != target; ++i) {
    major = std::nextafter(major, predict() < target ? kInf : 0.0);
  }
}

}  // namespace

FluxCalibration calibrate_flux(std::span<const FluxObservation> observations, const InkProperties& ink) {
  if (observations.empty()) throw Error(ErrorKind::Calibration, "no flux observations");

  const auto n = static_cast<Eigen::Index>(observations.size());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  bool usable = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    if (!std::isfinite(obs.flux_m3_s) || obs.flux_m3_s < 0.0) {
      throw Error(ErrorKind::Calibration, "observed flux must be finite and >= 0");
    }
    const FluxBasis basis = flux_basis(obs.bead, obs.conditions, ink);
    x(i, 0) = basis.pressure;
    x(i, 1) = basis.couette;
    y(i) = obs.flux_m3_s;
    usable = usable || (obs.bead.gap_width > 0.0 && obs.flux_m3_s > 0.0);
  }
  if (!usable) {
    throw Error(ErrorKind::Unidentifiable, "need an observation with an open gap and positive flux");
  }
  if (x.squaredNorm() == 0.0) {
    throw Error(ErrorKind::Unidentifiable, "no observation drives either flux term");
  }

  Eigen::Vector2d scale;
  for (int c = 0; c < 2; ++c) {
    const double norm = x.col(c).norm();
    scale(c) = norm > 0.0 ? norm : 1.0;
  }
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xs);
  cod.setThreshold(1e-10);

  FluxCalibration result;
  result.rank_deficient = cod.rank() < 2;
  Eigen::Vector2d k;
  if (result.rank_deficient) {
    // k = X^+ y on the unscaled matrix.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> raw(x);
    raw.setThreshold(1e-10);
    k = raw.solve(y);
  } else {
    k = cod.solve(y).cwiseQuotient(scale);
  }

  FluxModelParams params{k(0), k(1)};
  if (params.kappa_pressure < 0.0 || params.kappa_couette < 0.0) {
    // Optimum on an axis.
    const FluxModelParams a = fit_single(x, y, 0);
    const FluxModelParams b = fit_single(x, y, 1);
    params = residual_norm(x, y, a) <= residual_norm(x, y, b) ? a : b;
  }
  params.kappa_pressure = std::max(0.0, params.kappa_pressure);
  params.kappa_couette = std::max(0.0, params.kappa_couette);
  if (result.rank_deficient) {
    Eigen::Index anchor = 0;
    while (anchor < n && !(y(anchor) > 0.0)) ++anchor;
    if (anchor < n) polish_to_anchor(params, x(anchor, 0), x(anchor, 1), y(anchor));
  }
  result.params = params;
  result.residual_m3_s = residual_norm(x, y, params);
  return result;
}

FluxObservation reference_anchor() {
  FluxObservation obs;
  obs.conditions.pressure_drop_pa = 1.0;
  obs.conditions.rotation_rad_s = {0.0, 60.0, 0.0};
  obs.conditions.head_velocity_m_s = 0.040;
  obs.bead = BeadGeometry::standard();
  obs.flux_m3_s = 0.0656e-9;
  return obs;
}

FluxModelParams default_flux_params(const InkProperties& ink) {
  const FluxObservation anchor = reference_anchor();
  return calibrate_flux(std::span(&anchor, 1), ink).params;
}

FluxTable flux_table(std::span<const double> pressures_pa, std::span<const double> gap_widths_m,
                     const FlowConditions& cond_template, const FluxModelParams& params,
                     const BeadGeometry& bead, const InkProperties& ink) {
  if (pressures_pa.empty() || gap_widths_m.empty()) {
    throw Error(ErrorKind::InvalidInput, "flux table axes must be non-empty");
  }
  FluxTable table;
  table.pressures_pa.assign(pressures_pa.begin(), pressures_pa.end());
  table.gap_widths_m.assign(gap_widths_m.begin(), gap_widths_m.end());
  table.flux_m3_s.reserve(pressures_pa.size() * gap_widths_m.size());
  for (double pressure : pressures_pa) {
    FlowConditions cond = cond_template;
    cond.pressure_drop_pa = pressure;
    for (double gap : gap_widths_m) {
      BeadGeometry cell_bead = bead;
      cell_bead.gap_width = gap;
      table.flux_m3_s.push_back(gap_flux(cell_bead, cond, params, ink));
    }
  }
  return table;
}

double cross_section_area(double flux_m3_s, double print_speed_m_s) {
  if (!(print_speed_m_s > 0.0) || !std::isfinite(print_speed_m_s)) {
    throw Error(ErrorKind::Domain, "print speed must be > 0 to form a cross-section");
  }
  if (!std::isfinite(flux_m3_s) || flux_m3_s < 0.0) throw Error(ErrorKind::Domain, "flux must be >= 0");
  return flux_m3_s / print_speed_m_s;
}

}  // namespace lmprint::flow
