// Command-line front end: stress-state inspection, path simulation,
// yield-surface and damage-locus sweeps, and curve calibration.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssdam/drivers.hpp"
#include "ssdam/errors.hpp"
#include "ssdam/integrator.hpp"
#include "ssdam/io.hpp"
#include "ssdam/material.hpp"

namespace {

using namespace ssdam;

constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;

struct CommonOpts {
  std::string config;
  std::string out;
  std::string format;
  std::string preset;
  int steps = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--format", o.format, "csv | json");
  cmd->add_option("--preset", o.preset, "named preset");
  cmd->add_option("--steps", o.steps, "override step count");
}

RunConfig resolve_config(const CommonOpts& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  for (const auto& note : cfg.notices) std::cerr << "notice: " << note << '\n';
  if (!o.format.empty()) cfg.format = parse_format(o.format);
  if (!o.out.empty()) cfg.output = o.out;
  return cfg;
}

std::optional<MaterialParams> material_preset(const std::string& name) {
  if (name == "aa2024") return MaterialParams::aa2024();
  if (name == "lode_demo") return MaterialParams::lode_demo();
  if (name == "corrections_disabled")
    return MaterialParams::corrections_disabled();
  return std::nullopt;
}

// Writes through a stringstream so a failed run leaves no partial file.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw InvalidArgumentError("cannot open output file: " + out_path);
  os << content;
}

int cmd_invariants(const std::vector<double>& comps) {
  SymTensor sigma;
  for (int i = 0; i < 6; ++i) sigma[i] = comps[i];
  std::cout << stress_state_row(sigma, /*with_header=*/true) << '\n';
  return 0;
}

int cmd_simulate(const CommonOpts& o) {
  RunConfig cfg = resolve_config(o);
  PathSpec path;
  if (!o.preset.empty()) {
    auto p = PathSpec::preset(o.preset, o.preset == "simple_shear" ? 0.5 : 0.7,
                              o.steps > 0 ? o.steps : 2000);
    if (!p) throw InvalidArgumentError("unknown path preset: " + o.preset);
    path = *p;
  } else if (!cfg.path.is_null()) {
    path = path_from_json(cfg.path);
  } else {
    throw InvalidArgumentError("simulate needs --preset or a config path block");
  }
  if (o.steps > 0) path.steps = o.steps;

  std::vector<SimRecord> records;
  std::string truncation;
  int exit_code = 0;
  try {
    run_path_into(cfg.material, path, records);
  } catch (const NonConvergenceError& ex) {
    truncation = ex.what();
    exit_code = kExitNonConvergence;
  }

  std::ostringstream body;
  if (cfg.format == OutputFormat::Csv)
    write_records_csv(body, records, cfg.material, truncation);
  else
    write_records_json(body, records, cfg.material, truncation);
  emit(cfg.output, body.str());

  double peak = 0.0, ebar_at_peak = 0.0;
  for (const auto& r : records) {
    const double seq = stress_state(r.sigma).sigma_eq;
    if (seq > peak) {
      peak = seq;
      ebar_at_peak = r.ebar_p;
    }
  }
  std::cout << "peak_sigma_eq=" << format_g17(peak)
            << " ebar_p_at_peak=" << format_g17(ebar_at_peak);
  if (auto ef = fracture_strain(records, cfg.material))
    std::cout << " fracture_ebar_p=" << format_g17(*ef);
  std::cout << '\n';
  if (exit_code != 0)
    std::cerr << "simulate: non-convergence, partial records written: "
              << truncation << '\n';
  return exit_code;
}

int cmd_yield_surface(const CommonOpts& o) {
  RunConfig cfg = resolve_config(o);
  if (!o.preset.empty()) {
    auto m = material_preset(o.preset);
    if (!m) throw InvalidArgumentError("unknown material preset: " + o.preset);
    cfg.material = *m;
  }
  double ebar_p = 0.0, eta = cfg.material.eta0;
  int samples = 181;
  if (!cfg.sweep.is_null()) {
    ebar_p = cfg.sweep.value("ebar_p", ebar_p);
    eta = cfg.sweep.value("eta", eta);
    samples = cfg.sweep.value("samples", samples);
  }
  const auto points = yield_surface_sweep(cfg.material, ebar_p, eta, samples);
  std::ostringstream body;
  if (cfg.format == OutputFormat::Csv)
    write_yield_surface_csv(body, points, cfg.material);
  else
    write_yield_surface_json(body, points, cfg.material);
  emit(cfg.output, body.str());
  return 0;
}

std::vector<double> grid_from_json(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  std::vector<double> g;
  const double lo = j.at("min").get<double>();
  const double hi = j.at("max").get<double>();
  const double step = j.at("step").get<double>();
  for (double v = lo; v <= hi + 0.5 * step; v += step) g.push_back(v);
  return g;
}

int cmd_locus(const CommonOpts& o) {
  RunConfig cfg = resolve_config(o);
  // Defaults span the tabulated stress states plus the negative-triaxiality
  // cut-off region.
  std::vector<double> eta_grid;
  for (double v = -0.6; v <= 1.0 + 1e-9; v += 0.05) eta_grid.push_back(v);
  std::vector<double> theta0_grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  LocusMode mode = LocusMode::PowerLaw;
  if (!cfg.sweep.is_null()) {
    if (cfg.sweep.contains("eta")) eta_grid = grid_from_json(cfg.sweep["eta"]);
    if (cfg.sweep.contains("theta0"))
      theta0_grid = grid_from_json(cfg.sweep["theta0"]);
    const std::string m = cfg.sweep.value("mode", "power_law");
    if (m == "power_law")
      mode = LocusMode::PowerLaw;
    else if (m == "simulated")
      mode = LocusMode::Simulated;
    else
      throw InvalidArgumentError("unknown locus mode: " + m);
  }
  if (!o.preset.empty()) {
    if (o.preset == "power_law")
      mode = LocusMode::PowerLaw;
    else if (o.preset == "simulated")
      mode = LocusMode::Simulated;
    else
      throw InvalidArgumentError("unknown locus preset: " + o.preset);
  }
  const LocusTable table =
      damage_locus_sweep(cfg.material, eta_grid, theta0_grid, mode);
  std::ostringstream body;
  if (cfg.format == OutputFormat::Csv)
    write_locus_csv(body, table, cfg.material);
  else
    write_locus_json(body, table, cfg.material);
  emit(cfg.output, body.str());
  return 0;
}

int cmd_calibrate(const CommonOpts& o) {
  RunConfig cfg = resolve_config(o);
  if (cfg.fit.is_null())
    throw InvalidArgumentError("calibrate needs a config fit block");
  const std::string mode = cfg.fit.value("mode", "hardening");
  std::vector<std::pair<double, double>> points;
  for (const auto& row : cfg.fit.at("points"))
    points.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());

  std::ostringstream body;
  body << "# units: MPa, dimensionless strain\n" << param_echo(cfg.material)
       << '\n';
  if (mode == "hardening") {
    const HardeningFit fit = fit_hardening(points);
    body << "a,b,n,residual\n"
         << format_g17(fit.A) << ',' << format_g17(fit.B) << ','
         << format_g17(fit.n) << ',' << format_g17(fit.residual) << '\n';
  } else if (mode == "power_law") {
    const PowerLawFit fit = fit_power_law(points);
    body << "coefficient,exponent\n"
         << format_g17(fit.coefficient) << ',' << format_g17(fit.exponent)
         << '\n';
  } else {
    throw InvalidArgumentError("unknown fit mode: " + mode);
  }
  emit(cfg.output, body.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stress-state-corrected elastoplastic damage model toolkit"};
  app.require_subcommand(1);

  std::vector<double> comps;
  CLI::App* inv = app.add_subcommand(
      "invariants", "print stress-state descriptors of a stress tensor");
  inv->add_option("components", comps,
                  "six components: 11 22 33 12 23 13 [MPa]")
      ->expected(6);

  CommonOpts sim_o, ys_o, loc_o, cal_o;
  CLI::App* sim =
      app.add_subcommand("simulate", "run a material-point load path");
  add_common(sim, sim_o);
  CLI::App* ys = app.add_subcommand("yield-surface",
                                    "normalized yield radius over theta0");
  add_common(ys, ys_o);
  CLI::App* loc = app.add_subcommand("locus", "damage locus sweep");
  add_common(loc, loc_o);
  CLI::App* cal = app.add_subcommand("calibrate", "least-squares curve fits");
  add_common(cal, cal_o);

  try {
    app.parse(argc, argv);
    if (inv->parsed()) return cmd_invariants(comps);
    if (sim->parsed()) return cmd_simulate(sim_o);
    if (ys->parsed()) return cmd_yield_surface(ys_o);
    if (loc->parsed()) return cmd_locus(loc_o);
    if (cal->parsed()) return cmd_calibrate(cal_o);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const NonConvergenceError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
