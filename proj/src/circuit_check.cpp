#include "lmprint/circuit_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>

#include "lmprint/error.hpp"
#include "lmprint/units.hpp"

namespace lmprint::circuit {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

const io::Pad& lookup_pad(std::span<const io::Pad> pads, const std::string& name) {
  auto it = std::find_if(pads.begin(), pads.end(), [&](const io::Pad& p) { return p.name == name; });
  if (it == pads.end()) throw Error(ErrorKind::UnknownPad, "no pad named '" + name + "'");
  return *it;
}

}  // namespace

double outline_gap_mm(const sim::TraceSegment& a, const sim::TraceSegment& b) {
  const auto prox = segment_segment_proximity(a.start, a.end, b.start, b.end);
  return prox.distance - (a.width_mm() + b.width_mm()) / 2.0;
}

bool pad_touches(const io::Pad& pad, const sim::TraceSegment& segment, double touch_tolerance_mm) {
  return point_segment_distance(pad.at, segment.start, segment.end) <= segment.width_mm() / 2.0 + touch_tolerance_mm;
}

std::vector<Net> extract_nets(const sim::DepositedTrace& trace, std::span<const io::Pad> pads,
                              double touch_tolerance_mm) {
  if (!(touch_tolerance_mm >= 0.0)) throw Error(ErrorKind::InvalidInput, "touch tolerance must be >= 0");
  const auto& segs = trace.segments;
  const std::size_t n = segs.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (outline_gap_mm(segs[i], segs[j]) <= touch_tolerance_mm) sets.unite(i, j);
    }
  }
  // Pads join every segment they touch.
  std::vector<std::vector<std::size_t>> pad_hits(pads.size());
  for (std::size_t p = 0; p < pads.size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pad_touches(pads[p], segs[i], touch_tolerance_mm)) pad_hits[p].push_back(i);
    }
    for (std::size_t k = 1; k < pad_hits[p].size(); ++k) sets.unite(pad_hits[p][0], pad_hits[p][k]);
  }

  std::map<std::size_t, std::size_t> root_to_net;
  std::vector<Net> nets;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = root_to_net.try_emplace(root, nets.size());
    if (inserted) nets.push_back({nets.size(), {}, {}});
    nets[it->second].segments.push_back(i);
  }
  for (std::size_t p = 0; p < pads.size(); ++p) {
    if (pad_hits[p].empty()) continue;
    nets[root_to_net.at(sets.find(pad_hits[p][0]))].pads.push_back(pads[p].name);
  }
  for (auto& net : nets) std::sort(net.pads.begin(), net.pads.end());
  return nets;
}

namespace {

const Net* net_of_pad(std::span<const Net> nets, const std::string& name) {
  for (const auto& net : nets) {
    if (std::binary_search(net.pads.begin(), net.pads.end(), name)) return &net;
  }
  return nullptr;
}

}  // namespace

std::vector<bool> check_connectivity(std::span<const Net> nets, std::span<const io::Pad> pads,
                                     std::span<const std::pair<std::string, std::string>> pad_pairs) {
  std::vector<bool> connected;
  connected.reserve(pad_pairs.size());
  for (const auto& [a, b] : pad_pairs) {
    lookup_pad(pads, a);
    lookup_pad(pads, b);
    const Net* na = net_of_pad(nets, a);
    const Net* nb = net_of_pad(nets, b);
    if (!na) throw Error(ErrorKind::PadNotOnNet, "pad '" + a + "' touches no printed segment");
    if (!nb) throw Error(ErrorKind::PadNotOnNet, "pad '" + b + "' touches no printed segment");
    connected.push_back(na == nb);
  }
  return connected;
}

ResistanceEstimate estimate_resistance(const Net& net, const std::string& pad_a, const std::string& pad_b,
                                       double resistivity_ohm_m, const sim::DepositedTrace& trace,
                                       std::span<const io::Pad> pads, double touch_tolerance_mm) {
  if (!(resistivity_ohm_m > 0.0) || !std::isfinite(resistivity_ohm_m)) {
    throw Error(ErrorKind::InvalidInput, "resistivity must be > 0");
  }
  const io::Pad& first = lookup_pad(pads, pad_a);
  const io::Pad& second = lookup_pad(pads, pad_b);
  if (!std::binary_search(net.pads.begin(), net.pads.end(), pad_a) ||
      !std::binary_search(net.pads.begin(), net.pads.end(), pad_b)) {
    throw Error(ErrorKind::Disconnected, "pads '" + pad_a + "' and '" + pad_b + "' are not both on net " +
                                             std::to_string(net.id));
  }

  // Nodes are parameter stations along each segment; 0-ohm links join
  // stations that touch, and the pads.
  const auto& segs = trace.segments;
  std::map<std::size_t, std::vector<double>> stations;
  for (std::size_t s : net.segments) stations[s] = {0.0, 1.0};
  std::vector<std::tuple<std::size_t, double, std::size_t, double>> links;
  for (std::size_t x = 0; x < net.segments.size(); ++x) {
    for (std::size_t y = x + 1; y < net.segments.size(); ++y) {
      const std::size_t i = net.segments[x], j = net.segments[y];
      if (outline_gap_mm(segs[i], segs[j]) > touch_tolerance_mm) continue;
      const auto prox = segment_segment_proximity(segs[i].start, segs[i].end, segs[j].start, segs[j].end);
      stations[i].push_back(prox.t_first);
      stations[j].push_back(prox.t_second);
      links.emplace_back(i, prox.t_first, j, prox.t_second);
    }
  }
  const std::size_t pad_nodes[2] = {0, 1};
  std::vector<std::tuple<std::size_t, std::size_t, double>> pad_links;  // pad node, segment, t
  for (std::size_t k = 0; k < 2; ++k) {
    const io::Pad& pad = k == 0 ? first : second;
    for (std::size_t s : net.segments) {
      if (!pad_touches(pad, segs[s], touch_tolerance_mm)) continue;
      const double t = project_to_segment(pad.at, segs[s].start, segs[s].end);
      stations[s].push_back(t);
      pad_links.emplace_back(pad_nodes[k], s, t);
    }
  }

  std::map<std::pair<std::size_t, double>, std::size_t> node_index;
  std::size_t next_node = 2;
  for (auto& [s, ts] : stations) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (double t : ts) node_index[{s, t}] = next_node++;
  }

  struct Edge {
    std::size_t to;
    double ohms;
    std::size_t segment;  // npos for 0-ohm links
  };
  constexpr std::size_t kNoSegment = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<Edge>> graph(next_node);
  std::vector<std::pair<std::size_t, std::size_t>> resistive_edges;
  for (const auto& [s, ts] : stations) {
    const double length_m = units::mm_to_m(segs[s].length_mm());
    const double area = segs[s].area_m2;
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const std::size_t u = node_index.at({s, ts[k - 1]});
      const std::size_t v = node_index.at({s, ts[k]});
      const double ohms = area > 0.0 ? resistivity_ohm_m * (ts[k] - ts[k - 1]) * length_m / area
                                     : std::numeric_limits<double>::infinity();
      graph[u].push_back({v, ohms, s});
      graph[v].push_back({u, ohms, s});
      resistive_edges.emplace_back(u, v);
    }
  }
  DisjointSets shorted(next_node);
  for (const auto& [i, ti, j, tj] : links) {
    const std::size_t u = node_index.at({i, ti}), v = node_index.at({j, tj});
    graph[u].push_back({v, 0.0, kNoSegment});
    graph[v].push_back({u, 0.0, kNoSegment});
    shorted.unite(u, v);
  }
  for (const auto& [p, s, t] : pad_links) {
    const std::size_t v = node_index.at({s, t});
    graph[p].push_back({v, 0.0, kNoSegment});
    graph[v].push_back({p, 0.0, kNoSegment});
    shorted.unite(p, v);
  }

  // Dijkstra.
  std::vector<double> dist(next_node, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev_node(next_node, kNoSegment), prev_segment(next_node, kNoSegment);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[0] = 0.0;
  queue.emplace(0.0, 0);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& e : graph[u]) {
      const double nd = d + e.ohms;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        prev_node[e.to] = u;
        prev_segment[e.to] = e.segment;
        queue.emplace(nd, e.to);
      }
    }
  }
  if (!std::isfinite(dist[1])) {
    throw Error(ErrorKind::ZeroArea, "every path between '" + pad_a + "' and '" + pad_b +
                                         "' crosses a segment with zero cross-section");
  }

  ResistanceEstimate result;
  result.ohms = dist[1];
  for (std::size_t v = 1; v != 0 && v != kNoSegment; v = prev_node[v]) {
    if (prev_segment[v] != kNoSegment &&
        (result.path_segments.empty() || result.path_segments.back() != prev_segment[v])) {
      result.path_segments.push_back(prev_segment[v]);
    }
  }
  std::reverse(result.path_segments.begin(), result.path_segments.end());

  // Exact only for an unbranched chain.
  std::map<std::size_t, int> degree;
  std::size_t edges = 0;
  for (const auto& [u, v] : resistive_edges) {
    const std::size_t ru = shorted.find(u), rv = shorted.find(v);
    if (ru == rv) continue;
    ++degree[ru];
    ++degree[rv];
    ++edges;
  }
  const bool junction = std::any_of(degree.begin(), degree.end(), [](const auto& kv) { return kv.second >= 3; });
  result.approximate = junction || edges >= degree.size();
  return result;
}

const char* to_string(ViolationKind kind) {
  return kind == ViolationKind::MinWidth ? "min-width" : "clearance-short-risk";
}

DrcResult drc(const sim::DepositedTrace& trace, double min_width_mm, double min_clearance_mm,
              std::span<const Net> nets) {
  if (!(min_width_mm > 0.0) || !(min_clearance_mm > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "design-rule limits must be > 0");
  }
  const auto& segs = trace.segments;
  std::vector<std::size_t> net_of(segs.size(), std::numeric_limits<std::size_t>::max());
  for (const auto& net : nets) {
    for (std::size_t s : net.segments) net_of.at(s) = net.id;
  }

  DrcResult result;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].width_mm() < min_width_mm) {
      result.violations.push_back({ViolationKind::MinWidth, lerp(segs[i].start, segs[i].end, 0.5),
                                   segs[i].width_mm(), min_width_mm, {i}});
    }
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (net_of[i] == net_of[j]) continue;
      const auto prox = segment_segment_proximity(segs[i].start, segs[i].end, segs[j].start, segs[j].end);
      const double gap = prox.distance - (segs[i].width_mm() + segs[j].width_mm()) / 2.0;
      if (gap >= min_clearance_mm) continue;
      const Point2 where = lerp(lerp(segs[i].start, segs[i].end, prox.t_first),
                                lerp(segs[j].start, segs[j].end, prox.t_second), 0.5);
      result.violations.push_back({ViolationKind::ClearanceShortRisk, where, gap, min_clearance_mm, {i, j}});
    }
  }
  std::sort(result.violations.begin(), result.violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.location.x, a.location.y, a.kind, a.segments) <
           std::tie(b.location.x, b.location.y, b.kind, b.segments);
  });
  return result;
}

}  // namespace lmprint::circuit
