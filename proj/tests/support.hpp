#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lmprint/pattern_io.hpp"
#include "lmprint/print_sim.hpp"

namespace testing {

inline std::filesystem::path samples_dir() { return LMPRINT_SAMPLES_DIR; }

inline std::filesystem::path sample_drawing(const std::string& name) { return samples_dir() / "drawings" / name; }

inline lmprint::io::VectorDrawing load_sample(const std::string& name) {
  const auto path = sample_drawing(name);
  return lmprint::io::parse_drawing(lmprint::io::read_file(path), lmprint::io::format_from_path(path));
}

inline lmprint::sim::TraceSegment segment(lmprint::Point2 a, lmprint::Point2 b, double width_mm,
                                          double area_mm2 = 0.01, std::size_t run = 0) {
  lmprint::sim::TraceSegment s;
  s.start = a;
  s.end = b;
  s.width_m = width_mm * 1e-3;
  s.area_m2 = area_mm2 * 1e-6;
  s.run = run;
  return s;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("lmprint_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Components of the rendered trace by 4-connected flood fill, as segment sets.
inline std::set<std::set<std::size_t>> flood_fill_partition(const lmprint::sim::DepositedTrace& trace, double scale) {
  const auto image = lmprint::sim::rasterize(trace, {scale, 100'000'000, 0.1});
  std::vector<int> label(image.cells.size(), -1);
  int next = 0;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      if (image.at(x, y) == 0 || label[y * image.width + x] >= 0) continue;
      std::queue<std::pair<int, int>> queue;
      queue.emplace(x, y);
      label[y * image.width + x] = next;
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop();
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = cx + dx[k], ny = cy + dy[k];
          if (nx < 0 || ny < 0 || nx >= image.width || ny >= image.height) continue;
          if (image.at(nx, ny) == 0 || label[ny * image.width + nx] >= 0) continue;
          label[ny * image.width + nx] = next;
          queue.emplace(nx, ny);
        }
      }
      ++next;
    }
  }
  std::map<int, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < trace.segments.size(); ++i) {
    const lmprint::Point2 mid = lmprint::lerp(trace.segments[i].start, trace.segments[i].end, 0.5);
    const int x = static_cast<int>(std::floor((mid.x - image.origin_mm.x) / scale));
    const int y = static_cast<int>(std::floor((image.origin_mm.y - mid.y) / scale));
    groups[label[y * image.width + x]].insert(i);
  }
  std::set<std::set<std::size_t>> out;
  for (auto& [label_id, g] : groups) out.insert(g);
  return out;
}

}  // namespace testing
