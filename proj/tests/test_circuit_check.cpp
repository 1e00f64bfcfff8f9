#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "lmprint/circuit_check.hpp"
#include "lmprint/config.hpp"
#include "lmprint/error.hpp"
#include "support.hpp"

using namespace lmprint;
using namespace lmprint::circuit;
using testing::segment;

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

std::set<std::set<std::size_t>> partition(const std::vector<Net>& nets) {
  std::set<std::set<std::size_t>> out;
  for (const auto& n : nets) out.insert({n.segments.begin(), n.segments.end()});
  return out;
}

sim::DepositedTrace simulate_sample(const std::string& name, io::VectorDrawing& drawing) {
  ProjectConfig config;
  drawing = testing::load_sample(name);
  const auto tp = plan::plan(drawing, config.settings, config.corner_policy, config.limits, config.calibration);
  return sim::simulate(tp, config.simulation_environment()).trace;
}

}  // namespace

TEST_CASE("crossing and separated segments") {
  const sim::DepositedTrace cross{{segment({-5, 0}, {5, 0}, 0.2), segment({0, -5}, {0, 5}, 0.2)}};
  CHECK(extract_nets(cross, {}, 0.0).size() == 1);

  const sim::DepositedTrace apart{{segment({0, 0}, {10, 0}, 0.2), segment({0, 1}, {10, 1}, 0.2)}};
  const auto nets = extract_nets(apart, {}, 0.0);
  REQUIRE(nets.size() == 2);
  CHECK(nets[0].segments == std::vector<std::size_t>{0});
  CHECK(nets[1].segments == std::vector<std::size_t>{1});
  CHECK(extract_nets(apart, {}, 0.8).size() == 1);
  CHECK(extract_nets(apart, {}, 0.79).size() == 2);
  CHECK(outline_gap_mm(apart.segments[0], apart.segments[1]) == doctest::Approx(0.8));
  CHECK(kind_of([&] { extract_nets(apart, {}, -1.0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("a pad bridging two traces joins them") {
  const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.2), segment({0, 1}, {10, 1}, 0.2)}};
  const std::vector<io::Pad> pads{{"J", {5, 0.5}}};
  CHECK(extract_nets(trace, pads, 0.0).size() == 2);
  const auto nets = extract_nets(trace, pads, 0.45);
  REQUIRE(nets.size() == 1);
  CHECK(nets[0].pads == std::vector<std::string>{"J"});
}

TEST_CASE("sample drawings") {
  io::VectorDrawing drawing;
  const auto grid = simulate_sample("grid_antenna.json", drawing);
  const auto grid_nets = extract_nets(grid, drawing.pads, 0.0);
  REQUIRE(grid_nets.size() == 1);
  CHECK(grid_nets[0].pads == std::vector<std::string>{"FEED", "TIP"});
  const std::vector<std::pair<std::string, std::string>> feed{{"FEED", "TIP"}};
  CHECK(check_connectivity(grid_nets, drawing.pads, feed) == std::vector<bool>{true});

  const auto pcb = simulate_sample("pcb_sketch.json", drawing);
  const auto pcb_nets = extract_nets(pcb, drawing.pads, 0.0);
  CHECK(pcb_nets.size() == 3);
  const std::vector<std::pair<std::string, std::string>> pairs{{"VCC", "U1_1"}, {"SIG", "U1_2"}, {"VCC", "GND"}};
  CHECK(check_connectivity(pcb_nets, drawing.pads, pairs) == std::vector<bool>{true, true, false});
}

TEST_CASE("nets agree with a flood fill of the rendered trace") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(0.0, 10.0), width(0.2, 0.6);
  const double scale = 0.01;
  int accepted = 0;
  while (accepted < 50) {
    sim::DepositedTrace trace;
    const int n = 3 + accepted % 5;
    for (int k = 0; k < n; ++k) {
      trace.segments.push_back(segment({coord(rng), coord(rng)}, {coord(rng), coord(rng)}, width(rng)));
    }
    bool ambiguous = false;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(outline_gap_mm(trace.segments[i], trace.segments[j])) < 3.0 * scale) ambiguous = true;
      }
    }
    if (ambiguous) continue;
    ++accepted;
    CHECK(partition(extract_nets(trace, {}, 0.0)) == testing::flood_fill_partition(trace, scale));
  }
}

TEST_CASE("nets do not depend on segment order") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    sim::DepositedTrace trace;
    for (int k = 0; k < 8; ++k) trace.segments.push_back(segment({coord(rng), coord(rng)}, {coord(rng), coord(rng)}, 0.3));
    std::vector<std::size_t> perm(trace.segments.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    sim::DepositedTrace shuffled;
    for (std::size_t p : perm) shuffled.segments.push_back(trace.segments[p]);

    std::set<std::set<std::size_t>> mapped;
    for (const auto& net : extract_nets(shuffled, {}, 0.0)) {
      std::set<std::size_t> original;
      for (std::size_t s : net.segments) original.insert(perm[s]);
      mapped.insert(original);
    }
    CHECK(mapped == partition(extract_nets(trace, {}, 0.0)));
  }
}

TEST_CASE("connectivity errors") {
  const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.2)}};
  const std::vector<io::Pad> pads{{"A", {0, 0}}, {"B", {10, 0}}, {"FLOAT", {5, 5}}};
  const auto nets = extract_nets(trace, pads, 0.0);
  const std::vector<std::pair<std::string, std::string>> ok{{"A", "B"}}, unknown{{"A", "Z"}}, floating{{"A", "FLOAT"}};
  CHECK(check_connectivity(nets, pads, ok) == std::vector<bool>{true});
  CHECK(kind_of([&] { check_connectivity(nets, pads, unknown); }) == ErrorKind::UnknownPad);
  CHECK(kind_of([&] { check_connectivity(nets, pads, floating); }) == ErrorKind::PadNotOnNet);
}

TEST_CASE("series resistance") {
  const double width_mm = 1.0, area_mm2 = 1e6;
  const sim::DepositedTrace one{{segment({0, 0}, {1000, 0}, width_mm, area_mm2)}};
  const std::vector<io::Pad> pads{{"A", {0, 0}}, {"B", {1000, 0}}, {"C", {2000, 0}}};
  auto nets = extract_nets(one, pads, 0.0);
  auto r = estimate_resistance(nets[0], "A", "B", 1.0, one, pads, 0.0);
  CHECK(r.ohms == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.approximate);
  CHECK(r.path_segments == std::vector<std::size_t>{0});
  CHECK(estimate_resistance(nets[0], "A", "B", 2.94e-7, one, pads, 0.0).ohms ==
        doctest::Approx(2.94e-7).epsilon(1e-12));

  const sim::DepositedTrace two{{segment({0, 0}, {1000, 0}, width_mm, area_mm2), segment({1000, 0}, {2000, 0}, width_mm, area_mm2)}};
  nets = extract_nets(two, pads, 0.0);
  REQUIRE(nets.size() == 1);
  r = estimate_resistance(nets[0], "A", "C", 1.0, two, pads, 0.0);
  CHECK(r.ohms == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(r.approximate);
  CHECK(r.path_segments == std::vector<std::size_t>{0, 1});

  CHECK(kind_of([&] { estimate_resistance(nets[0], "A", "C", 0.0, two, pads, 0.0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("resistance over a lattice matches an all-pairs shortest path") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> area(0.005, 0.05);
  const int n = 4;
  auto node = [&](int i, int j) { return static_cast<std::size_t>(j * (n + 1) + i); };
  const std::size_t nodes = (n + 1) * (n + 1);
  for (int trial = 0; trial < 10; ++trial) {
    sim::DepositedTrace trace;
    std::vector<std::vector<double>> d(nodes, std::vector<double>(nodes, std::numeric_limits<double>::infinity()));
    for (std::size_t k = 0; k < nodes; ++k) d[k][k] = 0.0;
    auto add = [&](int i0, int j0, int i1, int j1) {
      const double a = area(rng);
      trace.segments.push_back(segment({double(i0), double(j0)}, {double(i1), double(j1)}, 0.2, a));
      const double ohms = 1e-3 / (a * 1e-6);
      d[node(i0, j0)][node(i1, j1)] = d[node(i1, j1)][node(i0, j0)] = ohms;
    };
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        if (i < n) add(i, j, i + 1, j);
        if (j < n) add(i, j, i, j + 1);
      }
    }
    for (std::size_t k = 0; k < nodes; ++k) {
      for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
    const std::vector<io::Pad> pads{{"IN", {0, 0}}, {"OUT", {double(n), double(n)}}, {"MID", {2, 1}}};
    const auto nets = extract_nets(trace, pads, 0.0);
    REQUIRE(nets.size() == 1);
    const auto r = estimate_resistance(nets[0], "IN", "OUT", 1.0, trace, pads, 0.0);
    CHECK(r.ohms == doctest::Approx(d[node(0, 0)][node(n, n)]).epsilon(1e-9));
    CHECK(r.approximate);
    const auto mid = estimate_resistance(nets[0], "IN", "MID", 1.0, trace, pads, 0.0);
    CHECK(mid.ohms == doctest::Approx(d[node(0, 0)][node(2, 1)]).epsilon(1e-9));
  }
}

TEST_CASE("resistance errors") {
  const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.2), segment({0, 5}, {10, 5}, 0.2, 0.0)}};
  const std::vector<io::Pad> pads{{"A", {0, 0}}, {"B", {10, 0}}, {"C", {0, 5}}, {"D", {10, 5}}};
  const auto nets = extract_nets(trace, pads, 0.0);
  REQUIRE(nets.size() == 2);
  CHECK(kind_of([&] { estimate_resistance(nets[0], "A", "C", 1.0, trace, pads, 0.0); }) == ErrorKind::Disconnected);
  CHECK(kind_of([&] { estimate_resistance(nets[1], "C", "D", 1.0, trace, pads, 0.0); }) == ErrorKind::ZeroArea);
  CHECK(kind_of([&] { estimate_resistance(nets[0], "A", "Q", 1.0, trace, pads, 0.0); }) == ErrorKind::UnknownPad);
}

TEST_CASE("design rule check") {
  SUBCASE("narrow line") {
    const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.05)}};
    const auto result = drc(trace, 0.1, 0.1, extract_nets(trace, {}, 0.0));
    CHECK_FALSE(result.passed());
    REQUIRE(result.violations.size() == 1);
    CHECK(result.violations[0].kind == ViolationKind::MinWidth);
    CHECK(result.violations[0].location == Point2{5, 0});
    CHECK(result.violations[0].measured_mm == doctest::Approx(0.05));
  }
  SUBCASE("close traces on different nets") {
    const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.2), segment({0, 0.25}, {10, 0.25}, 0.2)}};
    const auto nets = extract_nets(trace, {}, 0.0);
    REQUIRE(nets.size() == 2);
    const auto result = drc(trace, 0.1, 0.1, nets);
    REQUIRE(result.violations.size() == 1);
    CHECK(result.violations[0].kind == ViolationKind::ClearanceShortRisk);
    CHECK(result.violations[0].measured_mm == doctest::Approx(0.05));
    CHECK(result.violations[0].segments == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("well separated") {
    const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.2), segment({0, 1}, {10, 1}, 0.2)}};
    CHECK(drc(trace, 0.1, 0.1, extract_nets(trace, {}, 0.0)).passed());
    CHECK(kind_of([&] { drc(trace, 0.0, 0.1, {}); }) == ErrorKind::InvalidInput);
  }
  SUBCASE("close traces on one net") {
    const sim::DepositedTrace trace{{segment({0, 0}, {10, 0}, 0.2), segment({0, 0.25}, {10, 0.25}, 0.2),
                                     segment({0, 0}, {0, 0.25}, 0.2)}};
    CHECK(drc(trace, 0.1, 0.1, extract_nets(trace, {}, 0.0)).passed());
  }
}
