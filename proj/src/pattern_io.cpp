#include "lmprint/pattern_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lmprint/error.hpp"

namespace lmprint::io {

using nlohmann::json;

Bounds VectorDrawing::bounds() const {
  Bounds b;
  for (const auto& stroke : strokes) {
    for (const auto& p : stroke.points) b.expand(p);
  }
  for (const auto& pad : pads) b.expand(pad.at);
  return b;
}

void VectorDrawing::validate() const {
  auto finite = [](Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); };
  for (std::size_t i = 0; i < strokes.size(); ++i) {
    const auto& stroke = strokes[i];
    const std::string who = "stroke " + std::to_string(i);
    if (stroke.points.size() < 2) throw Error(ErrorKind::Malformed, who + " has fewer than 2 points");
    if (!std::all_of(stroke.points.begin(), stroke.points.end(), finite)) {
      throw Error(ErrorKind::Malformed, who + " has a non-finite coordinate");
    }
    if (polyline_length(stroke.points) == 0.0) throw Error(ErrorKind::Malformed, who + " has zero length");
  }
  std::set<std::string> names;
  for (const auto& pad : pads) {
    if (pad.name.empty()) throw Error(ErrorKind::Malformed, "pad with empty name");
    if (!finite(pad.at)) throw Error(ErrorKind::Malformed, "pad '" + pad.name + "' has a non-finite coordinate");
    if (!names.insert(pad.name).second) throw Error(ErrorKind::Malformed, "duplicate pad '" + pad.name + "'");
  }
}

const Pad* VectorDrawing::find_pad(std::string_view name) const {
  auto it = std::find_if(pads.begin(), pads.end(), [&](const Pad& p) { return p.name == name; });
  return it == pads.end() ? nullptr : &*it;
}

DrawingFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".svg" ? DrawingFormat::SvgSubset : DrawingFormat::NativeJson;
}

// Defined in svg_subset.cpp.
VectorDrawing parse_svg_subset(std::string_view bytes, const ParseOptions& options);

namespace {

bool blank(std::string_view bytes) {
  return std::all_of(bytes.begin(), bytes.end(), [](unsigned char c) { return std::isspace(c); });
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error(ErrorKind::Malformed, where + ": unknown key '" + key + "'");
    }
  }
}

Point2 point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::Malformed, where + ": a point is a 2-element numeric array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(Point2 p) { return json::array({p.x, p.y}); }

VectorDrawing parse_native(std::string_view bytes) {
  VectorDrawing drawing;
  if (blank(bytes)) return drawing;
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Malformed, std::string("drawing JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Malformed, "drawing JSON must be an object");
  reject_unknown_keys(doc, {"format", "version", "id", "strokes", "pads"}, "drawing");
  if (doc.contains("format") && doc["format"] != "lmprint-drawing") {
    throw Error(ErrorKind::Malformed, "drawing format tag must be \"lmprint-drawing\"");
  }
  if (doc.contains("version") && doc["version"] != 1) throw Error(ErrorKind::Malformed, "unsupported drawing version");
  if (doc.contains("id")) {
    if (!doc["id"].is_string()) throw Error(ErrorKind::Malformed, "drawing id must be a string");
    drawing.id = doc["id"].get<std::string>();
  }
  if (doc.contains("strokes")) {
    if (!doc["strokes"].is_array()) throw Error(ErrorKind::Malformed, "strokes must be an array");
    for (std::size_t i = 0; i < doc["strokes"].size(); ++i) {
      const json& js = doc["strokes"][i];
      const std::string where = "stroke " + std::to_string(i);
      if (!js.is_object()) throw Error(ErrorKind::Malformed, where + " must be an object");
      reject_unknown_keys(js, {"points", "closed"}, where);
      if (!js.contains("points") || !js["points"].is_array()) {
        throw Error(ErrorKind::Malformed, where + ": missing points array");
      }
      Stroke stroke;
      for (const auto& jp : js["points"]) stroke.points.push_back(point_from_json(jp, where));
      if (js.contains("closed")) {
        if (!js["closed"].is_boolean()) throw Error(ErrorKind::Malformed, where + ": closed must be boolean");
        stroke.closed = js["closed"].get<bool>();
      }
      drawing.strokes.push_back(std::move(stroke));
    }
  }
  if (doc.contains("pads")) {
    if (!doc["pads"].is_array()) throw Error(ErrorKind::Malformed, "pads must be an array");
    for (const auto& jp : doc["pads"]) {
      if (!jp.is_object()) throw Error(ErrorKind::Malformed, "pad must be an object");
      reject_unknown_keys(jp, {"name", "at"}, "pad");
      if (!jp.contains("name") || !jp["name"].is_string() || !jp.contains("at")) {
        throw Error(ErrorKind::Malformed, "pad needs a string name and a point");
      }
      drawing.pads.push_back({jp["name"].get<std::string>(), point_from_json(jp["at"], "pad")});
    }
  }
  drawing.validate();
  return drawing;
}

void check_finite(const json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw Error(ErrorKind::InvalidInput, "report value at " + path + " is not finite");
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite(v, path + "/" + k);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], path + "/" + std::to_string(i));
  }
}

}  // namespace

VectorDrawing parse_drawing(std::string_view bytes, DrawingFormat format, const ParseOptions& options) {
  if (!(options.flatten_tolerance_mm > 0.0)) throw Error(ErrorKind::InvalidInput, "flatten tolerance must be > 0");
  return format == DrawingFormat::SvgSubset ? parse_svg_subset(bytes, options) : parse_native(bytes);
}

std::string serialize_drawing(const VectorDrawing& drawing) {
  drawing.validate();
  json doc;
  doc["format"] = "lmprint-drawing";
  doc["version"] = 1;
  doc["id"] = drawing.id;
  doc["strokes"] = json::array();
  for (const auto& stroke : drawing.strokes) {
    json js;
    js["closed"] = stroke.closed;
    js["points"] = json::array();
    for (const auto& p : stroke.points) js["points"].push_back(point_to_json(p));
    doc["strokes"].push_back(std::move(js));
  }
  doc["pads"] = json::array();
  for (const auto& pad : drawing.pads) doc["pads"].push_back({{"name", pad.name}, {"at", point_to_json(pad.at)}});
  return doc.dump() + "\n";
}

namespace {

// Distance from p to the segment used for the flatness test.
double hull_deviation(Point2 p0, Point2 p1, Point2 p2, Point2 p3) {
  return std::max(point_segment_distance(p1, p0, p3), point_segment_distance(p2, p0, p3));
}

void subdivide(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double tolerance, int depth, std::vector<Point2>& out) {
  // Convex-hull bound on the deviation from the chord.
  if (depth >= 24 || hull_deviation(p0, p1, p2, p3) <= tolerance) {
    out.push_back(p3);
    return;
  }
  const Point2 p01 = lerp(p0, p1, 0.5), p12 = lerp(p1, p2, 0.5), p23 = lerp(p2, p3, 0.5);
  const Point2 p012 = lerp(p01, p12, 0.5), p123 = lerp(p12, p23, 0.5);
  const Point2 mid = lerp(p012, p123, 0.5);
  subdivide(p0, p01, p012, mid, tolerance, depth + 1, out);
  subdivide(mid, p123, p23, p3, tolerance, depth + 1, out);
}

}  // namespace

void flatten_cubic(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double tolerance, std::vector<Point2>& out) {
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidInput, "flatten tolerance must be > 0");
  subdivide(p0, p1, p2, p3, tolerance, 0, out);
}

RasterImage::RasterImage(int w, int h, double scale, Point2 origin)
    : width(w), height(h), scale_mm_per_px(scale), origin_mm(origin) {
  validate();
  cells.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
}

Point2 RasterImage::pixel_center(int x, int y) const {
  return {origin_mm.x + (x + 0.5) * scale_mm_per_px, origin_mm.y - (y + 0.5) * scale_mm_per_px};
}

void RasterImage::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorKind::InvalidInput, "raster dimensions must be >= 1");
  if (!(scale_mm_per_px > 0.0) || !std::isfinite(scale_mm_per_px)) {
    throw Error(ErrorKind::InvalidInput, "raster scale must be > 0");
  }
}

std::string write_raster(const RasterImage& image) {
  image.validate();
  const std::size_t count = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
  if (image.cells.size() != count) throw Error(ErrorKind::InvalidInput, "raster cell count does not match dimensions");
  std::string bytes = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  bytes.append(reinterpret_cast<const char*>(image.cells.data()), count);
  return bytes;
}

RasterImage read_raster(std::string_view bytes) {
  std::size_t pos = 0;
  auto fail = [](const std::string& what) -> void { throw Error(ErrorKind::Malformed, "PGM: " + what); };
  auto skip_space = [&] {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  };
  auto read_int = [&] {
    skip_space();
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) fail("expected a number");
    return std::stoi(std::string(bytes.substr(start, pos - start)));
  };
  if (bytes.substr(0, 2) != "P5") fail("missing P5 magic");
  pos = 2;
  const int w = read_int();
  const int h = read_int();
  if (read_int() != 255) fail("only maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) fail("missing header terminator");
  ++pos;
  RasterImage image(w, h, 1.0, {0.0, 0.0});
  if (bytes.size() - pos != image.cells.size()) fail("payload size does not match dimensions");
  std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(), image.cells.begin());
  return image;
}

std::string write_report(const Report& report) {
  json doc = json::object();
  doc["version"] = kReportVersion;
  for (const auto& [name, section] : report.sections) {
    if (name == "version") throw Error(ErrorKind::InvalidInput, "report section may not be named 'version'");
    check_finite(section, "/" + name);
    doc[name] = section;
  }
  return doc.dump() + "\n";
}

Report read_report(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Malformed, std::string("report JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || doc["version"] != kReportVersion) {
    throw Error(ErrorKind::Malformed, "report must be an object with version 1");
  }
  Report report;
  for (const auto& [key, value] : doc.items()) {
    if (key != "version") report.sections.emplace(key, value);
  }
  return report;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading '" + path.string() + "'");
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

}  // namespace lmprint::io
