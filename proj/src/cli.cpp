#include "lmprint/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lmprint/config.hpp"
#include "lmprint/contact_mechanics.hpp"
#include "lmprint/error.hpp"
#include "lmprint/ink_flow.hpp"
#include "lmprint/report.hpp"
#include "lmprint/units.hpp"
#include "lmprint/wetting_stability.hpp"

namespace lmprint::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kReferenceWidthUm = 126.0;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

struct Common {
  std::string config_path;
  std::string drawing_path;
  std::string out_dir;
  std::optional<double> speed_setting;
  std::optional<double> pressure_setting;
};

ProjectConfig load(const Common& c) {
  ProjectConfig cfg = c.config_path.empty() ? ProjectConfig{} : load_config(c.config_path);
  if (c.speed_setting) cfg.settings.speed_setting = *c.speed_setting;
  if (c.pressure_setting) cfg.settings.pressure_setting = *c.pressure_setting;
  cfg.validate();
  return cfg;
}

io::VectorDrawing load_drawing(const Common& c, const ProjectConfig& cfg) {
  const std::string bytes = io::read_file(c.drawing_path);
  auto drawing = io::parse_drawing(bytes, io::format_from_path(c.drawing_path),
                                   io::ParseOptions{cfg.flatten_tolerance_mm});
  if (drawing.id.empty()) drawing.id = fs::path(c.drawing_path).stem().string();
  return drawing;
}

void write_to_dir(const Common& c, const std::string& name, const std::string& bytes);

void emit(const Common& c, const std::string& name, const std::string& bytes, std::ostream& out) {
  if (c.out_dir.empty()) {
    out << bytes;
    return;
  }
  write_to_dir(c, name, bytes);
}

void write_to_dir(const Common& c, const std::string& name, const std::string& bytes) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + c.out_dir + ": " + ec.message());
  io::write_file(fs::path(c.out_dir) / name, bytes);
}

struct Pipeline {
  ProjectConfig cfg;
  io::VectorDrawing drawing;
  SettingsVerdict verdict;
  plan::Toolpath toolpath;
  plan::Estimate estimate;
};

Pipeline run_plan(const Common& c) {
  Pipeline p;
  p.cfg = load(c);
  p.drawing = load_drawing(c, p.cfg);
  p.verdict = validate_settings(p.cfg.settings, p.cfg.limits, p.cfg.calibration);
  p.toolpath = plan::plan(p.drawing, p.cfg.settings, p.cfg.corner_policy, p.cfg.limits, p.cfg.calibration);
  p.estimate = plan::estimate(p.toolpath, p.cfg.process_model(), p.cfg.dwell_s);
  return p;
}

json raster_json(const io::RasterImage& image) {
  return {{"width_px", image.width},
          {"height_px", image.height},
          {"scale_mm_per_px", image.scale_mm_per_px},
          {"origin_mm", {image.origin_mm.x, image.origin_mm.y}}};
}

void add_common_options(CLI::App* sub, Common& c, bool needs_drawing, bool needs_out) {
  sub->add_option("-c,--config", c.config_path, "Config JSON")->check(CLI::ExistingFile);
  if (needs_drawing) {
    sub->add_option("-d,--drawing", c.drawing_path, "Drawing (.json or .svg)")
        ->required()
        ->check(CLI::ExistingFile);
  }
  auto* out = sub->add_option("-o,--out", c.out_dir, "Output directory");
  if (needs_out) out->required();
  sub->add_option("--speed-setting", c.speed_setting, "Override the speed dial");
  sub->add_option("--pressure-setting", c.pressure_setting, "Override the pressure dial");
}

std::vector<flow::FluxObservation> read_observations(const std::string& path, const BeadGeometry& bead) {
  json doc;
  try {
    doc = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Malformed, path + ": " + e.what());
  }
  std::vector<flow::FluxObservation> list;
  try {
    for (const auto& o : doc.at("observations")) {
      flow::FluxObservation obs;
      obs.conditions.pressure_drop_pa = o.at("pressure_drop_pa").get<double>();
      const auto rot = o.at("rotation_rad_s").get<std::vector<double>>();
      if (rot.size() != 3) throw Error(ErrorKind::Malformed, "rotation_rad_s needs 3 components");
      obs.conditions.rotation_rad_s = {rot[0], rot[1], rot[2]};
      obs.conditions.head_velocity_m_s = o.value("head_velocity_m_s", 0.0);
      obs.bead = BeadGeometry::with_defaults(o.value("bead_radius_m", bead.bead_radius),
                                             o.value("gap_width_m", bead.gap_width));
      obs.flux_m3_s = units::mm3_to_m3(o.at("flux_mm3_s").get<double>());
      list.push_back(obs);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Malformed, path + ": " + e.what());
  }
  return list;
}

std::vector<sim::WidthSample> read_width_samples(const std::string& path) {
  std::istringstream in(io::read_file(path));
  std::vector<sim::WidthSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find_first_of("0123456789") != 0) continue;  // header
    std::vector<double> cols;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        cols.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw Error(ErrorKind::Malformed, path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (cols.size() != 3) {
      throw Error(ErrorKind::Malformed, path + ":" + std::to_string(line_no) + ": expected 3 columns");
    }
    samples.push_back({cols[0], cols[1], cols[2] * 1e-6});
  }
  return samples;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Roller-ball liquid-metal printing toolkit", "lmprint"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Common plan_opts, sim_opts, render_opts, check_opts;
  auto* plan_cmd = app.add_subcommand("plan", "Plan a toolpath and estimate time and ink");
  add_common_options(plan_cmd, plan_opts, true, false);

  auto* sim_cmd = app.add_subcommand("simulate", "Simulate deposition; writes report.json and preview.pgm");
  add_common_options(sim_cmd, sim_opts, true, true);

  auto* render_cmd = app.add_subcommand("render", "Simulate and write the preview raster only");
  add_common_options(render_cmd, render_opts, true, true);

  auto* check_cmd = app.add_subcommand("check", "Net extraction, connectivity, resistance and DRC");
  add_common_options(check_cmd, check_opts, true, true);
  std::vector<std::string> pairs;
  check_cmd->add_option("--pair", pairs, "Pad pair A:B to test (repeatable)");

  std::string obs_path;
  Common cal_opts;
  auto* cal_cmd = app.add_subcommand("calibrate-flux", "Fit flux gains to observations");
  cal_cmd->add_option("-c,--config", cal_opts.config_path, "Config JSON")->check(CLI::ExistingFile);
  cal_cmd->add_option("--observations", obs_path, "Observations JSON (default: reference anchor)")
      ->check(CLI::ExistingFile);

  std::string samples_path;
  auto* fit_cmd = app.add_subcommand("fit-width", "Fit the empirical width model to samples");
  fit_cmd->add_option("--samples", samples_path, "CSV: speed_mm_s,pressure_g,width_um")
      ->required()
      ->check(CLI::ExistingFile);

  Common table_opts;
  std::vector<double> pressures{0.0, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> gaps_um{0.0, 10.0, 25.0, 50.0, 100.0};
  double table_omega = 60.0;
  auto* table_cmd = app.add_subcommand("flux-table", "Tabulate gap flux over pressure and gap width");
  table_cmd->add_option("-c,--config", table_opts.config_path, "Config JSON")->check(CLI::ExistingFile);
  table_cmd->add_option("--pressures-pa", pressures, "Pressure drops, Pa")->delimiter(',');
  table_cmd->add_option("--gaps-um", gaps_um, "Gap widths, um")->delimiter(',');
  table_cmd->add_option("--omega-y", table_omega, "Transverse bead rotation, rad/s");

  std::optional<double> theta_deg;
  double q_mm3s = 0.0656;
  double v_mms = 40.0;
  double theta_step = 5.0;
  auto* width_cmd = app.add_subcommand("line-width", "Stable line width versus contact angle");
  width_cmd->add_option("--theta-deg", theta_deg, "Single contact angle, deg")->check(CLI::Range(0.0, 180.0));
  width_cmd->add_option("--q-mm3s", q_mm3s, "Flux, mm^3/s");
  width_cmd->add_option("--v-mms", v_mms, "Print speed, mm/s");
  width_cmd->add_option("--step-deg", theta_step, "Sweep step, deg")->check(CLI::PositiveNumber);

  Common probe_opts;
  std::optional<double> force_n;
  std::optional<double> probe_pressure;
  double normal_deg = 0.0;
  double tangential_deg = 0.0;
  std::string substrate_name;
  auto* probe_cmd = app.add_subcommand("contact-probe", "Hertz contact and creep at one load");
  probe_cmd->add_option("-c,--config", probe_opts.config_path, "Config JSON")->check(CLI::ExistingFile);
  auto* force_opt = probe_cmd->add_option("--force-n", force_n, "Normal load, N");
  probe_cmd->add_option("--pressure-setting", probe_pressure, "Pressure dial instead of a force")
      ->excludes(force_opt);
  probe_cmd->add_option("--normal-angle-deg", normal_deg, "Load tilt from the normal, deg");
  probe_cmd->add_option("--tangential-angle-deg", tangential_deg, "Tangential load angle, deg");
  probe_cmd->add_option("--substrate", substrate_name, "Substrate name (default: config selection)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (plan_cmd->parsed()) {
      Pipeline p = run_plan(plan_opts);
      io::Report report;
      report.sections["drawing_id"] = p.drawing.id;
      report.sections["settings"] = report::to_json(p.verdict);
      report.sections["toolpath"] = report::to_json(p.toolpath);
      report.sections["estimate"] = report::to_json(p.estimate);
      emit(plan_opts, "report.json", io::write_report(report), out);
      if (!plan_opts.out_dir.empty()) {
        out << "actions " << p.toolpath.actions.size() << "\n"
            << "print_time_s " << fmt(p.estimate.print_time_s) << "\n"
            << "ink_volume_mm3 " << fmt(p.estimate.ink_volume_mm3) << "\n";
      }
      return kExitOk;
    }

    if (sim_cmd->parsed() || render_cmd->parsed()) {
      const Common& opts = sim_cmd->parsed() ? sim_opts : render_opts;
      Pipeline p = run_plan(opts);
      const auto result = sim::simulate(p.toolpath, p.cfg.simulation_environment());
      const auto image = sim::rasterize(result.trace, p.cfg.raster);
      write_to_dir(opts, "preview.pgm", io::write_raster(image));
      if (sim_cmd->parsed()) {
        io::Report report;
        report.sections["drawing_id"] = p.drawing.id;
        report.sections["settings"] = report::to_json(p.verdict);
        report.sections["estimate"] = report::to_json(p.estimate);
        report.sections["simulation"] = report::to_json(result);
        report.sections["raster"] = raster_json(image);
        const double check_scale = sim::volume_check_scale(result.trace, p.cfg.raster.scale_mm_per_px);
        report.sections["raster"]["volume_check_scale_mm_per_px"] = check_scale;
        report.sections["raster"]["deposited_volume_mm3"] = sim::rasterized_volume_mm3(result.trace, check_scale);
        write_to_dir(opts, "report.json", io::write_report(report));
        out << "segments " << result.totals.segments << "\n"
            << "print_time_s " << fmt(result.totals.print_time_s) << "\n"
            << "ink_volume_mm3 " << fmt(result.totals.ink_volume_mm3) << "\n";
        for (const auto& w : result.warnings) out << "warning " << w << "\n";
      }
      out << "raster " << image.width << "x" << image.height << "\n";
      return kExitOk;
    }

    if (check_cmd->parsed()) {
      Pipeline p = run_plan(check_opts);
      const auto result = sim::simulate(p.toolpath, p.cfg.simulation_environment());
      const auto& rules = p.cfg.circuit;
      const auto nets = circuit::extract_nets(result.trace, p.drawing.pads, rules.touch_tolerance_mm);
      std::vector<std::pair<std::string, std::string>> pad_pairs;
      for (const auto& spec : pairs) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
          err << "error: --pair expects A:B, got '" << spec << "'\n\n" << app.help();
          return kExitUsage;
        }
        pad_pairs.emplace_back(spec.substr(0, colon), spec.substr(colon + 1));
      }
      const auto connected = circuit::check_connectivity(nets, p.drawing.pads, pad_pairs);
      const auto drc = circuit::drc(result.trace, rules.min_width_mm, rules.min_clearance_mm, nets);

      json connectivity = json::array();
      for (std::size_t i = 0; i < pad_pairs.size(); ++i) {
        json entry = {{"a", pad_pairs[i].first}, {"b", pad_pairs[i].second}, {"connected", bool(connected[i])}};
        if (connected[i] && rules.resistivity_ohm_m) {
          const auto* pad = p.drawing.find_pad(pad_pairs[i].first);
          for (const auto& net : nets) {
            if (std::find(net.pads.begin(), net.pads.end(), pad->name) == net.pads.end()) continue;
            const auto r = circuit::estimate_resistance(net, pad_pairs[i].first, pad_pairs[i].second,
                                                        *rules.resistivity_ohm_m, result.trace,
                                                        p.drawing.pads, rules.touch_tolerance_mm);
            entry["resistance_ohm"] = r.ohms;
            entry["approximate"] = r.approximate;
            entry["path_segments"] = r.path_segments;
          }
        }
        connectivity.push_back(std::move(entry));
      }

      io::Report report;
      report.sections["drawing_id"] = p.drawing.id;
      report.sections["nets"] = report::to_json(std::span<const circuit::Net>(nets));
      report.sections["connectivity"] = connectivity;
      report.sections["drc"] = report::to_json(drc);
      write_to_dir(check_opts, "report.json", io::write_report(report));

      out << "nets " << nets.size() << "\n";
      for (const auto& entry : connectivity) {
        out << "pair " << entry["a"].get<std::string>() << ":" << entry["b"].get<std::string>() << " "
            << (entry["connected"].get<bool>() ? "connected" : "open");
        if (entry.contains("resistance_ohm")) {
          out << " " << fmt(entry["resistance_ohm"].get<double>()) << " ohm";
          if (entry["approximate"].get<bool>()) out << " (approximate)";
        }
        out << "\n";
      }
      out << "drc " << (drc.passed() ? "pass" : "fail") << " " << drc.violations.size() << "\n";
      return kExitOk;
    }

    if (cal_cmd->parsed()) {
      const ProjectConfig cfg = load(cal_opts);
      std::vector<flow::FluxObservation> obs =
          obs_path.empty() ? std::vector<flow::FluxObservation>{flow::reference_anchor()}
                           : read_observations(obs_path, cfg.bead);
      const auto cal = flow::calibrate_flux(obs, cfg.ink);
      out << "observations " << obs.size() << "\n"
          << "kappa_pressure " << fmt(cal.params.kappa_pressure) << "\n"
          << "kappa_couette " << fmt(cal.params.kappa_couette) << "\n"
          << "residual_mm3_s " << fmt(units::m3_to_mm3(cal.residual_m3_s)) << "\n"
          << "rank_deficient " << (cal.rank_deficient ? "yes" : "no") << "\n";
      return kExitOk;
    }

    if (fit_cmd->parsed()) {
      const auto samples = read_width_samples(samples_path);
      const auto model = sim::fit_width_model(samples);
      out << "samples " << samples.size() << "\n"
          << "a " << fmt(model.a) << "\n"
          << "b " << fmt(model.b) << "\n"
          << "c " << fmt(model.c) << "\n"
          << "log_residual " << fmt(model.residual) << "\n";
      return kExitOk;
    }

    if (table_cmd->parsed()) {
      const ProjectConfig cfg = load(table_opts);
      std::vector<double> gaps_m;
      for (double g : gaps_um) gaps_m.push_back(g * 1e-6);
      flow::FlowConditions cond;
      cond.rotation_rad_s = {0.0, table_omega, 0.0};
      const auto table = flow::flux_table(pressures, gaps_m, cond, cfg.flux_params(), cfg.bead, cfg.ink);
      out << "pressure_Pa,gap_width_m,Q_mm3_per_s\n";
      for (std::size_t r = 0; r < table.pressures_pa.size(); ++r) {
        for (std::size_t col = 0; col < table.gap_widths_m.size(); ++col) {
          out << fmt(table.pressures_pa[r]) << "," << fmt(table.gap_widths_m[col]) << ","
              << fmt(units::m3_to_mm3(table.at(r, col))) << "\n";
        }
      }
      return kExitOk;
    }

    if (width_cmd->parsed()) {
      const double q = units::mm3_to_m3(q_mm3s);
      const double v = units::mm_to_m(v_mms);
      out << "theta_deg,L_um\n";
      if (theta_deg) {
        const auto line = wetting::stable_line_width(units::deg_to_rad(*theta_deg), q, v);
        const double l_um = units::m_to_um(line.width_m);
        out << fmt(*theta_deg) << "," << fmt(l_um) << "\n";
        const double dev = (l_um - kReferenceWidthUm) / kReferenceWidthUm * 100.0;
        out << "# reference " << fmt(kReferenceWidthUm) << " um at theta 40 deg, Q 0.0656 mm3/s, V 40 mm/s;"
            << " deviation " << fmt(dev) << " %" << (std::abs(dev) <= 10.0 ? " (within 10 %)" : " (outside 10 %)")
            << "\n";
        return kExitOk;
      }
      const int steps = static_cast<int>(std::floor(180.0 / theta_step + 1e-9));
      for (int i = 1; i <= steps; ++i) {
        const double deg = i * theta_step;
        const auto line = wetting::stable_line_width(units::deg_to_rad(deg), q, v);
        out << fmt(deg) << "," << fmt(units::m_to_um(line.width_m)) << "\n";
      }
      return kExitOk;
    }

    if (probe_cmd->parsed()) {
      const ProjectConfig cfg = load(probe_opts);
      const SubstrateProperties& substrate =
          substrate_name.empty() ? cfg.selected_substrate() : find_substrate(cfg.substrates, substrate_name);
      contact::ContactLoad load;
      if (force_n) {
        load.force_n = *force_n;
      } else {
        const double setting = probe_pressure.value_or(cfg.settings.pressure_setting);
        load.force_n = cfg.calibration.pressure_to_force(setting).newtons;
      }
      load.normal_angle_rad = units::deg_to_rad(normal_deg);
      load.tangential_angle_rad = units::deg_to_rad(tangential_deg);
      load.validate();
      const auto sol = contact::indentation(load, cfg.bead, substrate, cfg.hertz_form);
      const double p0 = sol.contact_radius > 0.0 ? contact::contact_pressure(sol, load, 0.0) : 0.0;
      out << "substrate " << substrate.name << "\n"
          << "force_n " << fmt(load.force_n) << "\n"
          << "indentation_um " << fmt(units::m_to_um(sol.indentation_depth)) << "\n"
          << "contact_radius_um " << fmt(units::m_to_um(sol.contact_radius)) << "\n"
          << "contact_area_mm2 " << fmt(units::m2_to_mm2(sol.contact_area)) << "\n"
          << "peak_pressure_pa " << fmt(p0) << "\n";
      const bool slips = contact::static_slip_check(load, substrate) == contact::SlipVerdict::Slip;
      out << "slip " << (slips ? "yes" : "no") << "\n";
      if (!slips) {
        const auto s = contact::sliding_ratio(load, substrate, sol, cfg.bead);
        out << "creep " << fmt(s.creep) << "\n"
            << "sr " << fmt(s.sr) << "\n"
            << "fr " << fmt(s.fr) << "\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace lmprint::cli
