#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "lmprint/error.hpp"
#include "lmprint/pattern_io.hpp"
#include "support.hpp"

using namespace lmprint;
using namespace lmprint::io;

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

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

VectorDrawing svg(const std::string& body, const std::string& root_attrs = "") {
  return parse_drawing("<svg xmlns=\"http://www.w3.org/2000/svg\"" + root_attrs + ">" + body + "</svg>",
                       DrawingFormat::SvgSubset);
}

Point2 cubic_at(Point2 p0, Point2 p1, Point2 p2, Point2 p3, double t) {
  const double u = 1.0 - t;
  return p0 * (u * u * u) + p1 * (3.0 * u * u * t) + p2 * (3.0 * u * t * t) + p3 * (t * t * t);
}

}  // namespace

TEST_CASE("empty documents give empty drawings") {
  CHECK(parse_drawing("", DrawingFormat::NativeJson).strokes.empty());
  CHECK(parse_drawing("  \n", DrawingFormat::SvgSubset).strokes.empty());
  CHECK(svg("").strokes.empty());
  CHECK(format_from_path("a/b.SVG") == DrawingFormat::SvgSubset);
  CHECK(format_from_path("a/b.json") == DrawingFormat::NativeJson);
}

TEST_CASE("unit square path") {
  const auto d = svg("<path d=\"M 0 0 L 1 0 L 1 1 L 0 1 Z\"/>", " viewBox=\"0 0 1 1\"");
  REQUIRE(d.strokes.size() == 1);
  const auto& s = d.strokes[0];
  CHECK(s.closed);
  REQUIRE(s.points.size() == 4);
  CHECK(s.points[0] == Point2{0.0, 1.0});
  CHECK(s.points[1] == Point2{1.0, 1.0});
  CHECK(s.points[2] == Point2{1.0, 0.0});
  CHECK(s.points[3] == Point2{0.0, 0.0});
}

TEST_CASE("path command coverage") {
  const auto d = svg("<g><path d=\"m1 1 h2 v2 H1 V1 z M10 10 l1 0 1 1\"/></g><title>x</title>");
  REQUIRE(d.strokes.size() == 2);
  CHECK(d.strokes[0].closed);
  CHECK(d.strokes[0].points.size() == 4);
  CHECK_FALSE(d.strokes[1].closed);
  CHECK(d.strokes[1].points.size() == 3);
  CHECK(d.strokes[1].points[2] == Point2{12.0, -11.0});

  const auto curve = svg("<path d=\"M0 0 C 0 10 10 10 10 0\"/>");
  REQUIRE(curve.strokes.size() == 1);
  CHECK(curve.strokes[0].points.size() > 4);
  CHECK(curve.strokes[0].points.back() == Point2{10.0, 0.0});
}

TEST_CASE("unsupported SVG is named with its location") {
  CHECK(kind_of([] { svg("<path d=\"M0 0 A 5 5 0 0 1 10 0\"/>"); }) == ErrorKind::UnsupportedSvg);
  CHECK(message_of([] { svg("<path d=\"M0 0 A 5 5 0 0 1 10 0\"/>"); }).find("'A'") != std::string::npos);
  CHECK(kind_of([] { svg("<circle cx=\"1\" cy=\"1\" r=\"1\"/>"); }) == ErrorKind::UnsupportedSvg);
  CHECK(message_of([] { svg("\n<circle cx=\"1\" cy=\"1\" r=\"1\"/>"); }).find("line 2") != std::string::npos);
  CHECK(kind_of([] { svg("<path transform=\"scale(2)\" d=\"M0 0 L1 1\"/>"); }) == ErrorKind::UnsupportedSvg);
  CHECK(kind_of([] { svg("<path d=\"M0 0 Q 1 1 2 0\"/>"); }) == ErrorKind::UnsupportedSvg);
  CHECK(kind_of([] { svg("<text>hi</text>"); }) == ErrorKind::UnsupportedSvg);
}

TEST_CASE("raster content is refused") {
  CHECK(kind_of([] { svg("<image href=\"a.png\" width=\"1\" height=\"1\"/>"); }) == ErrorKind::NonVector);
  CHECK(kind_of([] { svg("<g style=\"background:url(data:image/png;base64,AAAA)\"/>"); }) == ErrorKind::NonVector);
}

TEST_CASE("malformed SVG") {
  CHECK(kind_of([] { parse_drawing("<html></html>", DrawingFormat::SvgSubset); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("<svg><path d=\"M0 0 L1", DrawingFormat::SvgSubset); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { svg("<path d=\"0 0 L 1 1\"/>"); }) == ErrorKind::Malformed);
}

TEST_CASE("cubic flattening stays within tolerance") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> coord(-50.0, 50.0), tol_exp(-3.0, 0.0);
  for (int curve = 0; curve < 100; ++curve) {
    const Point2 p0{coord(rng), coord(rng)}, p1{coord(rng), coord(rng)}, p2{coord(rng), coord(rng)},
        p3{coord(rng), coord(rng)};
    const double tol = std::pow(10.0, tol_exp(rng));
    std::vector<Point2> poly{p0};
    flatten_cubic(p0, p1, p2, p3, tol, poly);
    REQUIRE(poly.size() >= 2);
    CHECK(poly.back() == p3);
    double worst = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const Point2 q = cubic_at(p0, p1, p2, p3, i / 10000.0);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < poly.size(); ++k) best = std::min(best, point_segment_distance(q, poly[k - 1], poly[k]));
      worst = std::max(worst, best);
    }
    CHECK(worst <= tol);
  }
}

TEST_CASE("native format round trip") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coord(-1e3, 1e3);
  std::uniform_int_distribution<int> count(2, 9);
  for (int trial = 0; trial < 100; ++trial) {
    VectorDrawing d;
    d.id = "case-" + std::to_string(trial);
    const int strokes = count(rng);
    for (int s = 0; s < strokes; ++s) {
      Stroke stroke;
      stroke.closed = (s % 3 == 0);
      const int pts = count(rng) + (stroke.closed ? 1 : 0);
      for (int p = 0; p < pts; ++p) stroke.points.push_back({coord(rng), coord(rng)});
      d.strokes.push_back(stroke);
    }
    for (int p = 0; p < trial % 4; ++p) d.pads.push_back({"P" + std::to_string(p), {coord(rng), coord(rng)}});
    const std::string text = serialize_drawing(d);
    const VectorDrawing back = parse_drawing(text, DrawingFormat::NativeJson);
    CHECK(back == d);
    CHECK(serialize_drawing(back) == text);
  }
}

TEST_CASE("native format validation") {
  CHECK(kind_of([] { parse_drawing("{\"format\":\"lmprint-drawing\",\"version\":1,\"extra\":1}", DrawingFormat::NativeJson); }) ==
        ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("{\"format\":\"other\"}", DrawingFormat::NativeJson); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("{\"version\":2}", DrawingFormat::NativeJson); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("{\"strokes\":[{\"points\":[[0,0]]}]}", DrawingFormat::NativeJson); }) ==
        ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("{\"strokes\":[{\"points\":[[0,0],[0,0]]}]}", DrawingFormat::NativeJson); }) ==
        ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("{\"pads\":[{\"name\":\"A\",\"at\":[0,0]},{\"name\":\"A\",\"at\":[1,0]}]}",
                                   DrawingFormat::NativeJson); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { parse_drawing("{", DrawingFormat::NativeJson); }) == ErrorKind::Malformed);
}

TEST_CASE("shipped drawings parse") {
  for (const char* name : {"line.json", "square.json", "grid_antenna.json", "pcb_sketch.json", "logo.svg"}) {
    CAPTURE(name);
    const auto d = testing::load_sample(name);
    CHECK_FALSE(d.strokes.empty());
    CHECK_NOTHROW(d.validate());
  }
  const auto grid = testing::load_sample("grid_antenna.json");
  CHECK(grid.strokes.size() == 24);
  CHECK(grid.bounds().width() == doctest::Approx(72.0));
  CHECK(grid.bounds().height() == doctest::Approx(33.6));
}

TEST_CASE("PGM bytes") {
  RasterImage one;
  const std::string bytes = write_raster(one);
  const std::string expected = std::string("P5\n1 1\n255\n") + '\0';
  CHECK(bytes == expected);
  CHECK(bytes.size() == 12);

  RasterImage img(3, 2, 0.1, {0.0, 0.0});
  img.at(0, 0) = 255;
  img.at(2, 1) = 255;
  const std::string out = write_raster(img);
  CHECK(out.substr(0, 11) == "P5\n3 2\n255\n");
  const RasterImage back = read_raster(out);
  CHECK(back.width == 3);
  CHECK(back.height == 2);
  CHECK(back.cells == img.cells);
  CHECK(write_raster(back) == out);

  CHECK(kind_of([] { read_raster("P2\n1 1\n255\n0"); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { read_raster("P5\n2 2\n255\n\1"); }) == ErrorKind::Malformed);
  CHECK(kind_of([] { read_raster("P5\n1 1\n65535\n\1\1"); }) == ErrorKind::Malformed);
}

TEST_CASE("report bytes") {
  CHECK(write_report({}) == "{\"version\":1}\n");

  Report r;
  r.sections["zeta"] = 0.1;
  r.sections["alpha"] = {{"b", 2}, {"a", 1.0 / 3.0}};
  r.sections["mid"] = nlohmann::json::array({1, 2.5, "x"});
  const std::string text = write_report(r);
  CHECK(text == "{\"alpha\":{\"a\":0.3333333333333333,\"b\":2},\"mid\":[1,2.5,\"x\"],\"version\":1,\"zeta\":0.1}\n");
  CHECK(read_report(text) == r);
  CHECK(write_report(read_report(text)) == text);

  Report bad;
  bad.sections["version"] = 2;
  CHECK(kind_of([&] { write_report(bad); }) == ErrorKind::InvalidInput);
  Report nan;
  nan.sections["x"] = {{"y", std::nan("")}};
  CHECK(kind_of([&] { write_report(nan); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { read_report("{\"version\":2}"); }) == ErrorKind::Malformed);
}

TEST_CASE("file helpers surface I/O failures") {
  CHECK(kind_of([] { read_file("/nonexistent/dir/file.json"); }) == ErrorKind::Io);
  CHECK(kind_of([] { write_file("/nonexistent/dir/file.json", "x"); }) == ErrorKind::Io);
  const auto dir = testing::scratch_dir("io");
  write_file(dir / "a.bin", std::string("a\0b", 3));
  CHECK(read_file(dir / "a.bin") == std::string("a\0b", 3));
}
