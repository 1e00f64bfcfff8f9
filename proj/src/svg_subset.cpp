// SVG import subset: <svg>, <g>, <path d="..."> with M L H V Z C (both
// cases). User units are millimetres; y is flipped so the drawing keeps the
// orientation it has on screen.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "lmprint/error.hpp"
#include "lmprint/pattern_io.hpp"

namespace lmprint::io {

namespace {

struct Location {
  int line = 1;
  int column = 1;
};

std::string describe(const Location& loc) {
  return "line " + std::to_string(loc.line) + ", column " + std::to_string(loc.column);
}

struct Element {
  std::string name;
  std::map<std::string, std::string> attributes;
  Location where;
};

class XmlScanner {
 public:
  explicit XmlScanner(std::string_view text) : text_(text) {}

  /// Visits every start tag in document order; returns false at end of input.
  template <typename Visit>
  void scan(Visit&& visit) {
    while (pos_ < text_.size()) {
      if (text_[pos_] != '<') {
        advance();
        continue;
      }
      if (starts_with("<!--")) {
        skip_past("-->");
      } else if (starts_with("<?")) {
        skip_past("?>");
      } else if (starts_with("<![CDATA[")) {
        skip_past("]]>");
      } else if (starts_with("<!")) {
        skip_past(">");
      } else if (starts_with("</")) {
        skip_past(">");
      } else {
        visit(read_start_tag());
      }
    }
  }

 private:
  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++loc_.line;
      loc_.column = 1;
    } else {
      ++loc_.column;
    }
    ++pos_;
  }

  void skip_past(std::string_view terminator) {
    const Location start = loc_;
    while (pos_ < text_.size() && !starts_with(terminator)) advance();
    if (pos_ >= text_.size()) throw Error(ErrorKind::Malformed, "SVG: unterminated markup at " + describe(start));
    for (std::size_t i = 0; i < terminator.size(); ++i) advance();
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string read_name() {
    std::string name;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '-' || c == '_' || c == '.') {
        name.push_back(c);
        advance();
      } else {
        break;
      }
    }
    return name;
  }

  Element read_start_tag() {
    Element element;
    element.where = loc_;
    advance();  // '<'
    element.name = read_name();
    if (element.name.empty()) throw Error(ErrorKind::Malformed, "SVG: bad tag at " + describe(element.where));
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw Error(ErrorKind::Malformed, "SVG: unterminated tag at " + describe(element.where));
      if (starts_with("/>")) {
        advance();
        advance();
        break;
      }
      if (text_[pos_] == '>') {
        advance();
        break;
      }
      const Location attr_loc = loc_;
      std::string key = read_name();
      skip_space();
      if (key.empty() || pos_ >= text_.size() || text_[pos_] != '=') {
        throw Error(ErrorKind::Malformed, "SVG: bad attribute at " + describe(attr_loc));
      }
      advance();
      skip_space();
      if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) {
        throw Error(ErrorKind::Malformed, "SVG: unquoted attribute at " + describe(attr_loc));
      }
      const char quote = text_[pos_];
      advance();
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != quote) {
        value.push_back(text_[pos_]);
        advance();
      }
      if (pos_ >= text_.size()) throw Error(ErrorKind::Malformed, "SVG: unterminated attribute at " + describe(attr_loc));
      advance();
      element.attributes[key] = value;
    }
    return element;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Location loc_;
};

class PathParser {
 public:
  PathParser(std::string_view d, const Location& where, double tolerance, std::vector<Stroke>& out)
      : d_(d), where_(where), tolerance_(tolerance), out_(out) {}

  void parse() {
    char command = 0;
    for (;;) {
      skip_separators();
      if (pos_ >= d_.size()) break;
      const char c = d_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        command = c;
        ++pos_;
        if (std::string_view("MmLlHhVvZzCc").find(c) == std::string_view::npos) {
          throw Error(ErrorKind::UnsupportedSvg, std::string("path command '") + c + "' is not supported (" + at() + ")");
        }
        if (c == 'Z' || c == 'z') {
          close_subpath();
          continue;
        }
      } else if (command == 0) {
        throw Error(ErrorKind::Malformed, "SVG path data must start with a command (" + at() + ")");
      } else if (command == 'Z' || command == 'z') {
        throw Error(ErrorKind::Malformed, "SVG path: numbers after Z (" + at() + ")");
      }
      command = execute(command);
    }
    finish_subpath();
  }

 private:
  std::string at() const {
    return "path at " + describe(where_) + ", offset " + std::to_string(pos_);
  }

  void skip_separators() {
    while (pos_ < d_.size() && (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ',')) ++pos_;
  }

  double number() {
    skip_separators();
    const std::size_t start = pos_;
    if (pos_ < d_.size() && (d_[pos_] == '+' || d_[pos_] == '-')) ++pos_;
    bool digits = false;
    while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < d_.size() && d_[pos_] == '.') {
      ++pos_;
      while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) {
      pos_ = start;
      throw Error(ErrorKind::Malformed, "SVG path: expected a number (" + at() + ")");
    }
    if (pos_ < d_.size() && (d_[pos_] == 'e' || d_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < d_.size() && (d_[pos_] == '+' || d_[pos_] == '-')) ++pos_;
      if (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) {
        while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    const std::string token(d_.substr(start, pos_ - start));
    const double value = std::strtod(token.c_str(), nullptr);
    if (!std::isfinite(value)) throw Error(ErrorKind::Malformed, "SVG path: non-finite number (" + at() + ")");
    return value;
  }

  Point2 pair(bool relative) {
    const double x = number();
    const double y = number();
    return relative ? Point2{current_.x + x, current_.y + y} : Point2{x, y};
  }

  void line_to(Point2 p) {
    if (!open_) begin_subpath(current_);
    if (!(p == points_.back())) points_.push_back(p);
    current_ = p;
  }

  void begin_subpath(Point2 p) {
    finish_subpath();
    points_ = {p};
    start_ = p;
    current_ = p;
    open_ = true;
    closed_ = false;
  }

  void close_subpath() {
    if (!open_) return;
    closed_ = true;
    current_ = start_;
    finish_subpath();
  }

  void finish_subpath() {
    if (!open_) return;
    open_ = false;
    if (closed_ && points_.size() > 1 && points_.back() == points_.front()) points_.pop_back();
    if (points_.size() >= 2 && polyline_length(points_) > 0.0) out_.push_back({points_, closed_});
    points_.clear();
  }

  // Consumes one argument group and returns the command implied for the next
  // bare group (a moveto continues as a lineto).
  char execute(char command) {
    const bool relative = std::islower(static_cast<unsigned char>(command));
    switch (std::toupper(static_cast<unsigned char>(command))) {
      case 'M':
        begin_subpath(pair(relative));
        return relative ? 'l' : 'L';
      case 'L':
        line_to(pair(relative));
        return command;
      case 'H': {
        const double x = number();
        line_to({relative ? current_.x + x : x, current_.y});
        return command;
      }
      case 'V': {
        const double y = number();
        line_to({current_.x, relative ? current_.y + y : y});
        return command;
      }
      case 'C': {
        const Point2 p0 = current_;
        const Point2 c1 = pair(relative);
        const Point2 c2 = pair(relative);
        const Point2 p3 = pair(relative);
        std::vector<Point2> flat;
        flatten_cubic(p0, c1, c2, p3, tolerance_, flat);
        for (const auto& p : flat) line_to(p);
        current_ = p3;
        return command;
      }
    }
    return command;
  }

  std::string_view d_;
  Location where_;
  double tolerance_;
  std::vector<Stroke>& out_;
  std::size_t pos_ = 0;
  Point2 current_;
  Point2 start_;
  std::vector<Point2> points_;
  bool open_ = false;
  bool closed_ = false;
};

std::optional<std::array<double, 4>> parse_view_box(const std::string& text) {
  std::istringstream in(text);
  std::array<double, 4> values{};
  for (double& v : values) {
    in >> v;
    if (!in) return std::nullopt;
    if (in.peek() == ',') in.get();
  }
  return values;
}

}  // namespace

VectorDrawing parse_svg_subset(std::string_view bytes, const ParseOptions& options) {
  VectorDrawing drawing;
  if (std::all_of(bytes.begin(), bytes.end(), [](unsigned char c) { return std::isspace(c); })) return drawing;

  static const std::vector<std::string> kIgnored = {"title", "desc", "metadata"};
  static const std::vector<std::string> kIgnoredAttributes = {
      "id", "class", "style", "fill", "stroke", "stroke-width", "stroke-linecap", "stroke-linejoin",
      "fill-rule", "opacity", "version", "xmlns", "xmlns:xlink", "width", "height", "viewBox",
      "xml:space", "d"};

  bool seen_root = false;
  std::optional<std::array<double, 4>> view_box;
  std::vector<Stroke> strokes;

  XmlScanner scanner(bytes);
  scanner.scan([&](const Element& element) {
    const std::string where = "<" + element.name + "> at " + describe(element.where);
    if (!seen_root) {
      if (element.name != "svg") throw Error(ErrorKind::Malformed, "SVG root element must be <svg>, found " + where);
      seen_root = true;
      if (auto it = element.attributes.find("viewBox"); it != element.attributes.end()) {
        view_box = parse_view_box(it->second);
        if (!view_box) throw Error(ErrorKind::Malformed, "bad viewBox on " + where);
      }
      if (element.attributes.contains("id")) drawing.id = element.attributes.at("id");
      return;
    }
    if (element.name == "image") {
      throw Error(ErrorKind::NonVector, "embedded raster " + where + "; only vector paths can be printed");
    }
    if (std::find(kIgnored.begin(), kIgnored.end(), element.name) != kIgnored.end()) return;
    if (element.name != "g" && element.name != "path") {
      throw Error(ErrorKind::UnsupportedSvg, "element " + where + " is outside the supported subset");
    }
    for (const auto& [key, value] : element.attributes) {
      if (key == "transform") throw Error(ErrorKind::UnsupportedSvg, "transform attribute on " + where);
      if (value.find("data:image") != std::string::npos) {
        throw Error(ErrorKind::NonVector, "embedded raster data on " + where);
      }
      if (std::find(kIgnoredAttributes.begin(), kIgnoredAttributes.end(), key) == kIgnoredAttributes.end() &&
          key.rfind("data-", 0) != 0 && key.rfind("inkscape:", 0) != 0 && key.rfind("sodipodi:", 0) != 0) {
        throw Error(ErrorKind::UnsupportedSvg, "attribute '" + key + "' on " + where);
      }
    }
    if (element.name == "path") {
      auto it = element.attributes.find("d");
      if (it == element.attributes.end()) throw Error(ErrorKind::Malformed, "path without d attribute: " + where);
      PathParser(it->second, element.where, options.flatten_tolerance_mm, strokes).parse();
    }
  });
  if (!seen_root) throw Error(ErrorKind::Malformed, "no <svg> element found");

  // Flip y so "down" in the SVG is "down" in drawing space.
  const double mirror = view_box ? 2.0 * (*view_box)[1] + (*view_box)[3] : 0.0;
  for (auto& stroke : strokes) {
    for (auto& p : stroke.points) p.y = mirror - p.y;
  }
  drawing.strokes = std::move(strokes);
  drawing.validate();
  return drawing;
}

}  // namespace lmprint::io
