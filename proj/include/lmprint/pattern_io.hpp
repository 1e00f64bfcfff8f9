#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lmprint/geometry.hpp"

namespace lmprint::io {

struct Stroke {
  std::vector<Point2> points;  // closed strokes do not repeat the first point
  bool closed = false;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct Pad {
  std::string name;
  Point2 at;

  friend bool operator==(const Pad&, const Pad&) = default;
};

struct VectorDrawing {
  std::string id;
  std::vector<Stroke> strokes;
  std::vector<Pad> pads;

  Bounds bounds() const;
  /// Finite coordinates, >= 2 points and non-zero length per stroke, unique pad names.
  void validate() const;
  const Pad* find_pad(std::string_view name) const;

  friend bool operator==(const VectorDrawing&, const VectorDrawing&) = default;
};

enum class DrawingFormat { NativeJson, SvgSubset };

/// ".svg" selects the SVG subset, anything else the native JSON format.
DrawingFormat format_from_path(const std::filesystem::path& path);

struct ParseOptions {
  double flatten_tolerance_mm = 0.05;
};

VectorDrawing parse_drawing(std::string_view bytes, DrawingFormat format, const ParseOptions& options = {});

/// Native JSON; parse_drawing(serialize_drawing(d)) == d.
std::string serialize_drawing(const VectorDrawing& drawing);

/// Appends the flattened cubic (excluding p0) to `out`. Every point of the
/// curve lies within `tolerance` of the emitted polyline.
void flatten_cubic(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double tolerance, std::vector<Point2>& out);

/// Grayscale occupancy grid. Row 0 is the top edge (largest y); `origin_mm`
/// is the drawing-space position of the top-left corner of pixel (0, 0).
struct RasterImage {
  int width = 1;
  int height = 1;
  double scale_mm_per_px = 1.0;
  Point2 origin_mm;
  std::vector<std::uint8_t> cells;

  RasterImage() : cells(1, 0) {}
  RasterImage(int w, int h, double scale, Point2 origin);

  std::uint8_t at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return cells[static_cast<std::size_t>(y) * width + x]; }
  Point2 pixel_center(int x, int y) const;
  void validate() const;
};

/// Binary PGM: "P5\n<w> <h>\n255\n" followed by row-major bytes.
std::string write_raster(const RasterImage& image);
/// Inverse of write_raster. Scale and origin are not stored in PGM and come back as defaults.
RasterImage read_raster(std::string_view bytes);

/// Sections are merged into the top-level object next to "version".
struct Report {
  std::map<std::string, nlohmann::json> sections;

  friend bool operator==(const Report&, const Report&) = default;
};

inline constexpr int kReportVersion = 1;

/// Sorted keys, shortest round-trip numbers, trailing newline.
std::string write_report(const Report& report);
Report read_report(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace lmprint::io
