#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lmprint/error.hpp"
#include "lmprint/print_sim.hpp"

namespace lmprint::sim {

double EmpiricalWidthModel::width_m(double speed_mm_s, double pressure_g) const {
  if (!(speed_mm_s > 0.0)) throw Error(ErrorKind::Domain, "empirical width needs speed > 0");
  if (!(pressure_g >= 0.0)) throw Error(ErrorKind::Domain, "empirical width needs pressure >= 0");
  return a * std::pow(pressure_g, b) / std::pow(speed_mm_s, c);
}

EmpiricalWidthModel fit_width_model(std::span<const WidthSample> samples) {
  std::set<double> speeds, pressures;
  for (const auto& s : samples) {
    if (!(s.speed_mm_s > 0.0 && s.pressure_g > 0.0 && s.width_m > 0.0) || !std::isfinite(s.speed_mm_s) ||
        !std::isfinite(s.pressure_g) || !std::isfinite(s.width_m)) {
      throw Error(ErrorKind::Unidentifiable, "width samples need positive finite speed, pressure and width");
    }
    speeds.insert(s.speed_mm_s);
    pressures.insert(s.pressure_g);
  }
  if (samples.size() < 3 || speeds.size() < 2 || pressures.size() < 2) {
    throw Error(ErrorKind::Unidentifiable, "need >= 3 samples spanning >= 2 speeds and >= 2 pressures");
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = std::log(s.pressure_g);
    x(i, 2) = -std::log(s.speed_mm_s);
    y(i) = std::log(s.width_m);
  }
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(x).rank() < 3) {
    throw Error(ErrorKind::Unidentifiable, "speed and pressure are collinear in the samples");
  }

  // Enumerate the active sets of {b >= 0, c >= 0}; keep the feasible one
  // with the smallest residual.
  double best_residual = std::numeric_limits<double>::infinity();
  Eigen::Vector3d best = Eigen::Vector3d::Zero();
  for (int mask = 0; mask < 4; ++mask) {
    std::vector<Eigen::Index> cols{0};
    if (!(mask & 1)) cols.push_back(1);
    if (!(mask & 2)) cols.push_back(2);
    Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = x.col(cols[k]);
    const Eigen::VectorXd sol = sub.colPivHouseholderQr().solve(y);
    Eigen::Vector3d full = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < cols.size(); ++k) full(cols[k]) = sol(static_cast<Eigen::Index>(k));
    if (full(1) < 0.0 || full(2) < 0.0) continue;
    const double residual = (x * full - y).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best = full;
    }
  }
  if (!(best(2) > 0.0)) {
    throw Error(ErrorKind::Unidentifiable, "samples do not show width decreasing with speed");
  }
  EmpiricalWidthModel model;
  model.a = std::exp(best(0));
  model.b = best(1);
  model.c = best(2);
  model.residual = best_residual / std::sqrt(static_cast<double>(n));
  return model;
}

}  // namespace lmprint::sim
