#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lmprint/error.hpp"
#include "lmprint/ink_flow.hpp"

using namespace lmprint;
using namespace lmprint::flow;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected lmprint::Error");
  return ErrorKind::Io;
}

FlowConditions cond(double dp, double wy, double wz = 0.0) {
  FlowConditions c;
  c.pressure_drop_pa = dp;
  c.rotation_rad_s = {0.0, wy, wz};
  c.head_velocity_m_s = 0.04;
  return c;
}

const InkProperties kInk = InkProperties::gain24_5();
const FluxModelParams kParams{0.3, 0.2};

}  // namespace

TEST_CASE("closed gap carries nothing") {
  auto bead = BeadGeometry::standard();
  bead.gap_width = 0.0;
  CHECK(gap_flux(bead, cond(5.0, 100.0), kParams, kInk) == 0.0);
}

TEST_CASE("rotation about z alone carries nothing") {
  const auto bead = BeadGeometry::standard();
  CHECK(gap_flux(bead, cond(0.0, 0.0, 250.0), kParams, kInk) == 0.0);
  CHECK(gap_flux(bead, cond(2.0, 30.0, 250.0), kParams, kInk) == gap_flux(bead, cond(2.0, 30.0), kParams, kInk));
  FlowConditions roll_x = cond(0.0, 0.0);
  roll_x.rotation_rad_s[0] = 80.0;
  CHECK(gap_flux(bead, roll_x, kParams, kInk) == 0.0);
}

TEST_CASE("terms superpose linearly") {
  const auto bead = BeadGeometry::standard();
  const double q1 = gap_flux(bead, cond(1.0, 40.0), kParams, kInk);
  const double q_dp = gap_flux(bead, cond(3.0, 40.0), kParams, kInk);
  const double q_w = gap_flux(bead, cond(1.0, 120.0), kParams, kInk);
  const double p_only = gap_flux(bead, cond(1.0, 0.0), kParams, kInk);
  const double w_only = gap_flux(bead, cond(0.0, 40.0), kParams, kInk);
  CHECK(q1 == doctest::Approx(p_only + w_only).epsilon(1e-14));
  CHECK(q_dp == doctest::Approx(3.0 * p_only + w_only).epsilon(1e-14));
  CHECK(q_w == doctest::Approx(p_only + 3.0 * w_only).epsilon(1e-14));
  CHECK(gap_flux(bead, cond(1.0, -40.0), kParams, kInk) == q1);
}

TEST_CASE("flux rises strictly with gap and pressure") {
  for (double dp : {0.0, 0.5, 2.0}) {
    for (double wy : {0.0, 60.0}) {
      if (dp == 0.0 && wy == 0.0) continue;
      double last = 0.0;
      for (int i = 1; i <= 200; ++i) {
        auto bead = BeadGeometry::standard();
        bead.gap_width = i * 1e-6;
        const double q = gap_flux(bead, cond(dp, wy), kParams, kInk);
        CHECK(q > last);
        last = q;
      }
    }
  }
}

TEST_CASE("anchor calibration reproduces the anchor exactly") {
  const auto anchor = reference_anchor();
  const auto cal = calibrate_flux(std::span(&anchor, 1), kInk);
  CHECK(cal.rank_deficient);
  CHECK(cal.params.kappa_pressure > 0.0);
  CHECK(cal.params.kappa_couette > 0.0);
  CHECK(cal.residual_m3_s == 0.0);
  CHECK(gap_flux(anchor.bead, anchor.conditions, cal.params, kInk) == 0.0656e-9);
  CHECK(default_flux_params(kInk) == cal.params);

  const FluxBasis basis = flux_basis(anchor.bead, anchor.conditions, kInk);
  CHECK(cal.params.kappa_couette * basis.couette > 100.0 * cal.params.kappa_pressure * basis.pressure);
}

TEST_CASE("calibration errors") {
  std::vector<FluxObservation> none;
  CHECK(kind_of([&] { calibrate_flux(none, kInk); }) == ErrorKind::Calibration);

  auto closed = reference_anchor();
  closed.bead.gap_width = 0.0;
  std::vector<FluxObservation> all_closed{closed, closed};
  CHECK(kind_of([&] { calibrate_flux(all_closed, kInk); }) == ErrorKind::Unidentifiable);

  auto idle = reference_anchor();
  idle.conditions = cond(0.0, 0.0);
  std::vector<FluxObservation> undriven{idle};
  CHECK(kind_of([&] { calibrate_flux(undriven, kInk); }) == ErrorKind::Unidentifiable);

  auto negative = reference_anchor();
  negative.flux_m3_s = -1e-12;
  std::vector<FluxObservation> bad{negative};
  CHECK(kind_of([&] { calibrate_flux(bad, kInk); }) == ErrorKind::Calibration);
}

TEST_CASE("generate and recover") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gain(0.01, 5.0), dp(0.0, 10.0), wy(0.0, 200.0), gw(5e-6, 1e-4);
  for (int trial = 0; trial < 50; ++trial) {
    const FluxModelParams truth{gain(rng), gain(rng)};
    std::vector<FluxObservation> obs;
    for (int i = 0; i < 8; ++i) {
      FluxObservation o;
      o.conditions = cond(dp(rng), wy(rng));
      o.bead = BeadGeometry::with_defaults(350e-6, gw(rng));
      o.flux_m3_s = gap_flux(o.bead, o.conditions, truth, kInk);
      obs.push_back(o);
    }
    const auto cal = calibrate_flux(obs, kInk);
    CHECK_FALSE(cal.rank_deficient);
    CHECK(cal.params.kappa_pressure == doctest::Approx(truth.kappa_pressure).epsilon(1e-9));
    CHECK(cal.params.kappa_couette == doctest::Approx(truth.kappa_couette).epsilon(1e-9));
  }
}

TEST_CASE("non-negative gains under conflicting data") {
  const auto bead = BeadGeometry::standard();
  std::vector<FluxObservation> obs;
  const FluxModelParams truth{0.0, 0.2};
  for (double w : {20.0, 40.0, 80.0}) {
    FluxObservation o{cond(0.0, w), bead, gap_flux(bead, cond(0.0, w), truth, kInk)};
    obs.push_back(o);
  }
  FluxObservation o{cond(5.0, 0.0), bead, 0.0};
  obs.push_back(o);
  FluxObservation p{cond(5.0, 40.0), bead, 0.8 * gap_flux(bead, cond(0.0, 40.0), truth, kInk)};
  obs.push_back(p);
  const auto cal = calibrate_flux(obs, kInk);
  CHECK(cal.params.kappa_pressure >= 0.0);
  CHECK(cal.params.kappa_couette > 0.0);
}

TEST_CASE("flux table") {
  const auto bead = BeadGeometry::standard();
  const std::vector<double> pressures{0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  const std::vector<double> gaps{0.0, 1e-5, 2e-5, 3e-5, 4e-5, 5e-5, 6e-5, 7e-5, 8e-5, 9e-5};
  const auto table = flux_table(pressures, gaps, cond(0.0, 60.0), kParams, bead, kInk);
  for (std::size_t r = 0; r < pressures.size(); ++r) {
    CHECK(table.at(r, 0) == 0.0);
    for (std::size_t c = 0; c < gaps.size(); ++c) {
      auto cell_bead = bead;
      cell_bead.gap_width = gaps[c];
      CHECK(table.at(r, c) == gap_flux(cell_bead, cond(pressures[r], 60.0), kParams, kInk));
      if (c > 0) CHECK(table.at(r, c) > table.at(r, c - 1));
      if (r > 0 && c > 0) CHECK(table.at(r, c) > table.at(r - 1, c));
    }
  }
  CHECK(kind_of([&] { flux_table({}, gaps, cond(0.0, 60.0), kParams, bead, kInk); }) == ErrorKind::InvalidInput);
}

TEST_CASE("cross-section area") {
  CHECK(cross_section_area(0.0656e-9, 0.040) * 1e6 == doctest::Approx(1.64e-3).epsilon(1e-14));
  CHECK(cross_section_area(0.0, 0.040) == 0.0);
  CHECK(kind_of([] { cross_section_area(1e-9, 0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { cross_section_area(1e-9, -1.0); }) == ErrorKind::Domain);
}
