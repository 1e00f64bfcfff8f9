#include "lmprint/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "lmprint/error.hpp"
#include "lmprint/units.hpp"

namespace lmprint {

using nlohmann::json;

namespace {

/// Reads keys from one JSON object and rejects whatever was not read.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) fail("must be an object");
  }

  bool has(const char* key) const { return object_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    return object_.at(key);
  }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(std::string("'") + key + "' must be finite");
    return d;
  }

  std::string text(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::optional<ObjectReader> child(const char* key) {
    if (!has(key)) return std::nullopt;
    return ObjectReader(raw(key), path_ + "/" + key);
  }

  std::pair<double, double> number_pair(const json& v, const std::string& what) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(what + " must be a [number, number] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Config, (path_.empty() ? "/" : path_) + ": " + what);
  }

  const std::string& path() const { return path_; }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

SubstrateProperties read_substrate(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SubstrateProperties s;
  s.name = r.text("name", "");
  if (s.name.empty()) r.fail("substrate needs a name");
  s.youngs_modulus = r.number("youngs_modulus", 0.0);
  s.poisson_ratio = r.number("poisson_ratio", 0.0);
  s.friction_coefficient = r.number("friction_coefficient", 0.0);
  s.gamma_sub_air = r.number("gamma_sub_air", 0.0);
  s.gamma_sub_lm = r.number("gamma_sub_lm", 0.0);
  if (r.has("angle_table")) {
    const json& table = r.raw("angle_table");
    if (!table.is_array()) r.fail("angle_table must be an array");
    for (const auto& node : table) {
      auto [force, angle] = r.number_pair(node, "angle_table entry");
      s.angle_table.push_back({force, angle});
    }
  }
  r.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    r.fail(e.what());
  }
  return s;
}

json substrate_to_json(const SubstrateProperties& s) {
  json table = json::array();
  for (const auto& n : s.angle_table) table.push_back({n.force_n, n.angle_deg});
  return {{"name", s.name},
          {"youngs_modulus", s.youngs_modulus},
          {"poisson_ratio", s.poisson_ratio},
          {"friction_coefficient", s.friction_coefficient},
          {"gamma_sub_air", s.gamma_sub_air},
          {"gamma_sub_lm", s.gamma_sub_lm},
          {"angle_table", table}};
}

std::vector<SubstrateProperties> read_substrate_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw Error(ErrorKind::Config, path + ": must be an array");
  std::vector<SubstrateProperties> list;
  std::set<std::string> names;
  for (std::size_t i = 0; i < j.size(); ++i) {
    list.push_back(read_substrate(j[i], path + "/" + std::to_string(i)));
    if (!names.insert(list.back().name).second) {
      throw Error(ErrorKind::Config, path + ": duplicate substrate '" + list.back().name + "'");
    }
  }
  return list;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string(what) + ": " + e.what());
  }
}

}  // namespace

void ProjectConfig::validate() const {
  try {
    ink.validate();
    bead.validate();
    limits.validate();
    for (const auto& s : substrates) s.validate();
    selected_substrate();
    if (flux) flux->validate();
    corner_policy.validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::Config, what);
  };
  require(settings.speed_setting >= 0.0 && settings.pressure_setting >= 0.0, "settings must be >= 0");
  require(drive_pressure_pa >= 0.0, "process.drive_pressure_pa must be >= 0");
  require(normal_angle_deg >= 0.0 && normal_angle_deg < 90.0, "process.normal_angle_deg must lie in [0, 90)");
  require(dwell_s >= 0.0, "process.dwell_s must be >= 0");
  require(slip_limit >= 0.0, "process.slip_limit must be >= 0");
  require(raster.scale_mm_per_px > 0.0, "raster.scale_mm_per_px must be > 0");
  require(raster.margin_mm >= 0.0, "raster.margin_mm must be >= 0");
  require(flatten_tolerance_mm > 0.0, "drawing.flatten_tolerance_mm must be > 0");
  require(circuit.touch_tolerance_mm >= 0.0, "circuit.touch_tolerance_mm must be >= 0");
  require(circuit.min_width_mm > 0.0 && circuit.min_clearance_mm > 0.0, "circuit limits must be > 0");
  require(!circuit.resistivity_ohm_m || *circuit.resistivity_ohm_m > 0.0, "circuit.resistivity_ohm_m must be > 0");
  require(width_source == sim::WidthSource::Physics || empirical_width.has_value(),
          "process.width_source 'empirical' needs an empirical_width section");
}

const SubstrateProperties& ProjectConfig::selected_substrate() const {
  try {
    return find_substrate(substrates, substrate);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
}

flow::FluxModelParams ProjectConfig::flux_params() const {
  return flux ? *flux : flow::default_flux_params(ink);
}

plan::ProcessModel ProjectConfig::process_model() const {
  plan::ProcessModel model;
  model.ink = ink;
  model.substrate = selected_substrate();
  model.bead = bead;
  model.flux = flux_params();
  model.drive_pressure_pa = drive_pressure_pa;
  model.normal_angle_rad = units::deg_to_rad(normal_angle_deg);
  model.tangential_angle_rad = units::deg_to_rad(tangential_angle_deg);
  model.hertz_form = hertz_form;
  model.fixed_omega_y_rad_s = fixed_omega_y_rad_s;
  return model;
}

sim::SimulationEnvironment ProjectConfig::simulation_environment() const {
  sim::SimulationEnvironment env;
  env.process = process_model();
  env.policy = corner_policy;
  env.limits = limits;
  env.slip_limit = slip_limit;
  env.dwell_s = dwell_s;
  env.width_source = width_source;
  env.empirical = empirical_width;
  return env;
}

ProjectConfig parse_config(std::string_view json_text) {
  const json doc = parse_json(json_text, "config");
  ProjectConfig c;
  ObjectReader root(doc, "");

  if (auto r = root.child("ink")) {
    c.ink.name = r->text("name", c.ink.name);
    c.ink.density = r->number("density", c.ink.density);
    c.ink.kinematic_viscosity = r->number("kinematic_viscosity", c.ink.kinematic_viscosity);
    c.ink.surface_tension_lm_air = r->number("surface_tension_lm_air", c.ink.surface_tension_lm_air);
    c.ink.melting_point = r->number("melting_point", c.ink.melting_point);
    r->finish();
  }
  if (root.has("substrates")) c.substrates = read_substrate_list(root.raw("substrates"), "/substrates");
  c.substrate = root.text("substrate", c.substrate);
  if (auto r = root.child("bead")) {
    const double radius = r->number("bead_radius", c.bead.bead_radius);
    const double gap = r->number("gap_width", c.bead.gap_width);
    c.bead = BeadGeometry::with_defaults(radius, gap);
    c.bead.channel_width_eff = r->number("channel_width_eff", c.bead.channel_width_eff);
    c.bead.channel_length_eff = r->number("channel_length_eff", c.bead.channel_length_eff);
    r->finish();
  }
  if (auto r = root.child("limits")) {
    c.limits.max_speed_mm_s = r->number("max_speed_mm_s", c.limits.max_speed_mm_s);
    c.limits.preferred_max_speed_mm_s = r->number("preferred_max_speed_mm_s", c.limits.preferred_max_speed_mm_s);
    c.limits.max_pressure_g = r->number("max_pressure_g", c.limits.max_pressure_g);
    r->finish();
  }
  if (auto r = root.child("calibration")) {
    auto speed = c.calibration.speed_anchor();
    std::vector<std::pair<double, double>> pressure(c.calibration.pressure_anchors().begin() + 1,
                                                    c.calibration.pressure_anchors().end());
    if (r->has("speed_anchor")) speed = r->number_pair(r->raw("speed_anchor"), "speed_anchor");
    if (r->has("pressure_anchors")) {
      const json& list = r->raw("pressure_anchors");
      if (!list.is_array()) r->fail("pressure_anchors must be an array");
      pressure.clear();
      for (const auto& p : list) pressure.push_back(r->number_pair(p, "pressure anchor"));
    }
    r->finish();
    try {
      c.calibration = SettingCalibration(speed, pressure);
    } catch (const Error& e) {
      r->fail(e.what());
    }
  }
  if (auto r = root.child("settings")) {
    c.settings.speed_setting = r->number("speed", c.settings.speed_setting);
    c.settings.pressure_setting = r->number("pressure", c.settings.pressure_setting);
    r->finish();
  }
  if (auto r = root.child("flux")) {
    c.flux = flow::FluxModelParams{r->number("kappa_pressure", 0.0), r->number("kappa_couette", 0.0)};
    r->finish();
  }
  if (auto r = root.child("process")) {
    c.drive_pressure_pa = r->number("drive_pressure_pa", c.drive_pressure_pa);
    c.normal_angle_deg = r->number("normal_angle_deg", c.normal_angle_deg);
    c.tangential_angle_deg = r->number("tangential_angle_deg", c.tangential_angle_deg);
    const std::string form = r->text("hertz_form", "physical");
    if (form == "physical") {
      c.hertz_form = contact::HertzForm::Physical;
    } else if (form == "literal") {
      c.hertz_form = contact::HertzForm::LiteralPrinted;
    } else {
      r->fail("hertz_form must be 'physical' or 'literal'");
    }
    if (r->has("fixed_omega_y_rad_s")) c.fixed_omega_y_rad_s = r->number("fixed_omega_y_rad_s", 0.0);
    c.dwell_s = r->number("dwell_s", c.dwell_s);
    c.slip_limit = r->number("slip_limit", c.slip_limit);
    const std::string source = r->text("width_source", "physics");
    if (source == "physics") {
      c.width_source = sim::WidthSource::Physics;
    } else if (source == "empirical") {
      c.width_source = sim::WidthSource::Empirical;
    } else {
      r->fail("width_source must be 'physics' or 'empirical'");
    }
    r->finish();
  }
  if (auto r = root.child("empirical_width")) {
    sim::EmpiricalWidthModel m;
    m.a = r->number("a", 0.0);
    m.b = r->number("b", 0.0);
    m.c = r->number("c", 0.0);
    r->finish();
    if (!(m.a > 0.0 && m.b >= 0.0 && m.c >= 0.0)) r->fail("needs a > 0, b >= 0, c >= 0");
    c.empirical_width = m;
  }
  if (auto r = root.child("corner_policy")) {
    auto& p = c.corner_policy;
    p.threshold_deg = r->number("threshold_deg", p.threshold_deg);
    try {
      p.strategy = plan::corner_strategy_from_string(r->text("strategy", plan::to_string(p.strategy)));
    } catch (const Error& e) {
      r->fail(e.what());
    }
    p.slowdown_factor = r->number("slowdown_factor", p.slowdown_factor);
    p.fillet_radius_mm = r->number("fillet_radius_mm", p.fillet_radius_mm);
    p.fillet_tolerance_mm = r->number("fillet_tolerance_mm", p.fillet_tolerance_mm);
    r->finish();
  }
  if (auto r = root.child("raster")) {
    c.raster.scale_mm_per_px = r->number("scale_mm_per_px", c.raster.scale_mm_per_px);
    const double max_pixels = r->number("max_pixels", static_cast<double>(c.raster.max_pixels));
    if (!(max_pixels >= 1.0)) r->fail("max_pixels must be >= 1");
    c.raster.max_pixels = static_cast<std::size_t>(max_pixels);
    c.raster.margin_mm = r->number("margin_mm", c.raster.margin_mm);
    r->finish();
  }
  if (auto r = root.child("drawing")) {
    c.flatten_tolerance_mm = r->number("flatten_tolerance_mm", c.flatten_tolerance_mm);
    r->finish();
  }
  if (auto r = root.child("circuit")) {
    c.circuit.touch_tolerance_mm = r->number("touch_tolerance_mm", c.circuit.touch_tolerance_mm);
    c.circuit.min_width_mm = r->number("min_width_mm", c.circuit.min_width_mm);
    c.circuit.min_clearance_mm = r->number("min_clearance_mm", c.circuit.min_clearance_mm);
    if (r->has("resistivity_ohm_m")) c.circuit.resistivity_ohm_m = r->number("resistivity_ohm_m", 0.0);
    r->finish();
  }
  root.finish();
  c.validate();
  return c;
}

ProjectConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, e.what());
  }
  return parse_config(text);
}

std::string config_to_json(const ProjectConfig& c) {
  json doc;
  doc["ink"] = {{"name", c.ink.name},
                {"density", c.ink.density},
                {"kinematic_viscosity", c.ink.kinematic_viscosity},
                {"surface_tension_lm_air", c.ink.surface_tension_lm_air},
                {"melting_point", c.ink.melting_point}};
  doc["substrates"] = json::array();
  for (const auto& s : c.substrates) doc["substrates"].push_back(substrate_to_json(s));
  doc["substrate"] = c.substrate;
  doc["bead"] = {{"bead_radius", c.bead.bead_radius},
                 {"gap_width", c.bead.gap_width},
                 {"channel_width_eff", c.bead.channel_width_eff},
                 {"channel_length_eff", c.bead.channel_length_eff}};
  doc["limits"] = {{"max_speed_mm_s", c.limits.max_speed_mm_s},
                   {"preferred_max_speed_mm_s", c.limits.preferred_max_speed_mm_s},
                   {"max_pressure_g", c.limits.max_pressure_g}};
  json anchors = json::array();
  for (std::size_t i = 1; i < c.calibration.pressure_anchors().size(); ++i) {
    const auto& [s, g] = c.calibration.pressure_anchors()[i];
    anchors.push_back({s, g});
  }
  doc["calibration"] = {{"speed_anchor", {c.calibration.speed_anchor().first, c.calibration.speed_anchor().second}},
                        {"pressure_anchors", anchors}};
  doc["settings"] = {{"speed", c.settings.speed_setting}, {"pressure", c.settings.pressure_setting}};
  if (c.flux) doc["flux"] = {{"kappa_pressure", c.flux->kappa_pressure}, {"kappa_couette", c.flux->kappa_couette}};
  json process = {{"drive_pressure_pa", c.drive_pressure_pa},
                  {"normal_angle_deg", c.normal_angle_deg},
                  {"tangential_angle_deg", c.tangential_angle_deg},
                  {"hertz_form", c.hertz_form == contact::HertzForm::Physical ? "physical" : "literal"},
                  {"dwell_s", c.dwell_s},
                  {"slip_limit", c.slip_limit},
                  {"width_source", c.width_source == sim::WidthSource::Physics ? "physics" : "empirical"}};
  if (c.fixed_omega_y_rad_s) process["fixed_omega_y_rad_s"] = *c.fixed_omega_y_rad_s;
  doc["process"] = process;
  if (c.empirical_width) {
    doc["empirical_width"] = {{"a", c.empirical_width->a}, {"b", c.empirical_width->b}, {"c", c.empirical_width->c}};
  }
  doc["corner_policy"] = {{"threshold_deg", c.corner_policy.threshold_deg},
                          {"strategy", plan::to_string(c.corner_policy.strategy)},
                          {"slowdown_factor", c.corner_policy.slowdown_factor},
                          {"fillet_radius_mm", c.corner_policy.fillet_radius_mm},
                          {"fillet_tolerance_mm", c.corner_policy.fillet_tolerance_mm}};
  doc["raster"] = {{"scale_mm_per_px", c.raster.scale_mm_per_px},
                   {"max_pixels", c.raster.max_pixels},
                   {"margin_mm", c.raster.margin_mm}};
  doc["drawing"] = {{"flatten_tolerance_mm", c.flatten_tolerance_mm}};
  json circuit = {{"touch_tolerance_mm", c.circuit.touch_tolerance_mm},
                  {"min_width_mm", c.circuit.min_width_mm},
                  {"min_clearance_mm", c.circuit.min_clearance_mm}};
  if (c.circuit.resistivity_ohm_m) circuit["resistivity_ohm_m"] = *c.circuit.resistivity_ohm_m;
  doc["circuit"] = circuit;
  return doc.dump(2) + "\n";
}

std::vector<SubstrateProperties> parse_substrate_db(std::string_view json_text) {
  const json doc = parse_json(json_text, "substrate database");
  ObjectReader root(doc, "");
  if (!root.has("substrates")) root.fail("missing 'substrates'");
  auto list = read_substrate_list(root.raw("substrates"), "/substrates");
  root.finish();
  return list;
}

std::string substrate_db_to_json(const std::vector<SubstrateProperties>& db) {
  json doc;
  doc["substrates"] = json::array();
  for (const auto& s : db) doc["substrates"].push_back(substrate_to_json(s));
  return doc.dump(2) + "\n";
}

}  // namespace lmprint
