#include "lmprint/report.hpp"

#include "lmprint/units.hpp"

namespace lmprint::report {

using nlohmann::json;

namespace {

json point(Point2 p) { return json::array({p.x, p.y}); }

}  // namespace

json to_json(const SettingsVerdict& verdict) {
  const char* status = verdict.status == VerdictStatus::Ok               ? "ok"
                       : verdict.status == VerdictStatus::QualityWarning ? "ok-with-quality-warning"
                                                                         : "violation";
  return {{"status", status}, {"violations", verdict.violations}, {"warnings", verdict.warnings}};
}

json to_json(const plan::Toolpath& toolpath) {
  json actions = json::array();
  for (const auto& action : toolpath.actions) {
    if (const auto* tap = std::get_if<plan::Tap>(&action)) {
      actions.push_back({{"op", "tap"}, {"at_mm", point(tap->at)}, {"force_n", tap->force_n}});
    } else if (const auto* move = std::get_if<plan::Move>(&action)) {
      actions.push_back({{"op", "move"},
                         {"to_mm", point(move->to)},
                         {"speed_mm_s", move->speed_mm_s},
                         {"pressure_g", move->pressure_g}});
    } else {
      actions.push_back({{"op", "lift"}});
    }
  }
  return {{"drawing_id", toolpath.metadata.drawing_id},
          {"policy", toolpath.metadata.policy},
          {"actions", actions}};
}

json to_json(const plan::Estimate& estimate) {
  return {{"print_time_s", estimate.print_time_s}, {"ink_volume_mm3", estimate.ink_volume_mm3}};
}

json to_json(const sim::SimulationResult& result) {
  json segments = json::array();
  for (const auto& s : result.trace.segments) {
    json j = {{"start_mm", point(s.start)},
              {"end_mm", point(s.end)},
              {"run", s.run},
              {"width_um", units::m_to_um(s.width_m)},
              {"flux_mm3_s", units::m3_to_mm3(s.flux_m3_s)},
              {"area_mm2", units::m2_to_mm2(s.area_m2)},
              {"creep", s.creep},
              {"speed_mm_s", s.speed_mm_s},
              {"pressure_g", s.pressure_g},
              {"duration_s", s.duration_s},
              {"contact_angle_deg", s.contact_angle_deg},
              {"flags", sim::flag_names(s.flags)}};
    if (s.alternate_width_m) j["alternate_width_um"] = units::m_to_um(*s.alternate_width_m);
    segments.push_back(std::move(j));
  }
  const auto& t = result.totals;
  json totals = {{"segments", t.segments},
                 {"runs", t.runs},
                 {"print_time_s", t.print_time_s},
                 {"ink_volume_mm3", t.ink_volume_mm3},
                 {"printed_length_mm", t.printed_length_mm},
                 {"corner_risks", t.corner_risks},
                 {"slip_risks", t.slip_risks},
                 {"speed_warnings", t.speed_warnings},
                 {"clamped_angle_lookups", t.clamped_angle_lookups}};
  if (t.max_width_discrepancy_rel) totals["max_width_discrepancy_rel"] = *t.max_width_discrepancy_rel;
  return {{"segments", segments}, {"totals", totals}, {"warnings", result.warnings}};
}

json to_json(std::span<const circuit::Net> nets) {
  json list = json::array();
  for (const auto& n : nets) list.push_back({{"id", n.id}, {"segments", n.segments}, {"pads", n.pads}});
  return list;
}

json to_json(const circuit::DrcResult& drc) {
  json list = json::array();
  for (const auto& v : drc.violations) {
    list.push_back({{"kind", circuit::to_string(v.kind)},
                    {"location_mm", point(v.location)},
                    {"measured_mm", v.measured_mm},
                    {"limit_mm", v.limit_mm},
                    {"segments", v.segments}});
  }
  return {{"passed", drc.passed()}, {"violations", list}};
}

}  // namespace lmprint::report
