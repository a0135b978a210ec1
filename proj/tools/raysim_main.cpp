#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "raysim/config.hpp"
#include "raysim/errors.hpp"
#include "raysim/harness.hpp"
#include "raysim/kinematics.hpp"
#include "raysim/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCalibration = 3;

raysim::ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return raysim::ExperimentConfig{};
  return raysim::ExperimentConfig::load(path);
}

raysim::CalibrationResult load_calibration(const raysim::ExperimentConfig& cfg,
                                           const std::string& out_dir) {
  const std::string path = out_dir + "/calibration.json";
  if (!std::filesystem::exists(path))
    throw raysim::input_error("no calibration found at " + path + "; run `raysim calibrate` first");
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  const raysim::CalibrationResult cal = raysim::parse_calibration_json(ss.str(), cfg);
  if (!cal.ok())
    throw raysim::calibration_error("stored calibration did not converge; re-run calibrate");
  return cal;
}

std::string surface_csv(const raysim::FinWaveParams& p, double t_end_s, double dt_s,
                        double step_mm, const std::string& hash) {
  std::ostringstream out;
  out << "# raysim " << raysim::kVersion << "\n# config = " << hash << "\n";
  out << "x_mm,y_mm,t_s,z_mm\n";
  char buf[160];
  for (double t = 0.0; t <= t_end_s + 1e-12; t += dt_s)
    for (double x = 0.0; x <= p.chord_mm + 1e-9; x += step_mm)
      for (double y = 0.0; y <= p.span_mm + 1e-9; y += step_mm) {
        std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.4f,%.6f\n", x, y, t,
                      raysim::fin_surface_mm(x, y, t, p));
        out << buf;
      }
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz-driven milliswimmer simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = "out";
  double dt_ms = 0.0;
  double grid_step_mm = 0.0;
  app.add_option("--config", config_path, "configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--dt", dt_ms, "integrator step in milliseconds");
  app.add_option("--grid-step", grid_step_mm, "field grid step in millimetres");

  auto* field_cmd = app.add_subcommand("field", "coil field tools");
  field_cmd->require_subcommand(1);
  auto* field_scan = field_cmd->add_subcommand("scan", "emit a field grid CSV");
  double scan_extent_mm = 40.0;
  std::array<double, 3> scan_currents{1.0, 1.0, 1.0};
  field_scan->add_option("--extent", scan_extent_mm, "half extent of the scan cube (mm)");
  field_scan->add_option("--currents", scan_currents, "per-axis currents (A)");
  auto* field_homog = field_cmd->add_subcommand("homogeneity", "working-volume boxes");
  std::vector<double> tolerances{0.01, 0.02, 0.05};
  field_homog->add_option("--tolerances", tolerances, "relative deviation bounds");

  auto* cal_cmd = app.add_subcommand("calibrate", "fit the speed model to the peak target");
  auto* sweep_cmd = app.add_subcommand("sweep", "speed map over the B x f grid");
  auto* sens_cmd = app.add_subcommand("sensitivity", "frequency vs field-strength step response");
  auto* run_cmd = app.add_subcommand("run", "run a trajectory plan");
  std::string plan_name = "Z";
  run_cmd->add_option("--plan", plan_name, "Z | square | nabla | path to a config with plan keys");
  auto* surface_cmd = app.add_subcommand("surface", "fin surface displacement grid");
  double surface_t_end = 0.2, surface_dt = 0.02, surface_step = 0.5;
  surface_cmd->add_option("--t-end", surface_t_end, "trace duration (s)");
  surface_cmd->add_option("--dt", surface_dt, "trace step (s)");
  surface_cmd->add_option("--step", surface_step, "grid step (mm)");

  CLI11_PARSE(app, argc, argv);

  try {
    raysim::ExperimentConfig cfg = load_config(config_path);
    if (dt_ms > 0) cfg.set("sim.dt_s", dt_ms * 1e-3);
    if (grid_step_mm > 0) cfg.set("sim.grid_step_mm", grid_step_mm);
    std::filesystem::create_directories(out_dir);
    const std::string hash = cfg.hash();

    if (field_scan->parsed()) {
      const std::string csv =
          raysim::field_scan_csv(cfg.coil(), scan_currents, scan_extent_mm, cfg.grid_step_mm(), hash);
      raysim::write_file(out_dir + "/field_scan.csv", csv);
      std::cout << "wrote " << out_dir << "/field_scan.csv\n";
    } else if (field_homog->parsed()) {
      const raysim::TriaxialCoil coil = cfg.coil();
      std::ostringstream report;
      report << "# raysim " << raysim::kVersion << "\n# config = " << hash << "\n";
      report << "tolerance,dx_mm,dy_mm,dz_mm\n";
      for (double tol : tolerances) {
        const raysim::HomogeneityBox box =
            raysim::homogeneity_volume(coil, {1.0, 1.0, 1.0}, tol, cfg.grid_step_mm());
        char line[96];
        std::snprintf(line, sizeof(line), "%.4g,%.6g,%.6g,%.6g\n", tol, box.dx_mm, box.dy_mm,
                      box.dz_mm);
        report << line;
        std::cout << "tolerance " << tol * 100 << "%: " << box.dx_mm << " x " << box.dy_mm
                  << " x " << box.dz_mm << " mm\n";
      }
      raysim::write_file(out_dir + "/homogeneity.csv", report.str());
    } else if (cal_cmd->parsed()) {
      const raysim::CalibrationResult cal = raysim::calibrate(cfg);
      raysim::write_file(out_dir + "/calibration.json", raysim::calibration_json(cal, hash));
      if (!cal.ok()) {
        std::cerr << "calibration failed; violated constraints:\n";
        for (const std::string& v : cal.violated_constraints) std::cerr << "  - " << v << "\n";
        return kExitCalibration;
      }
      std::cout << "calibration converged, objective " << cal.objective << "\n";
    } else if (sweep_cmd->parsed()) {
      const raysim::CalibrationResult cal = load_calibration(cfg, out_dir);
      const raysim::SweepResult sweep = raysim::run_sweep(cfg, cal);
      raysim::write_file(out_dir + "/sweep.csv", raysim::sweep_csv(sweep));
      std::cout << "wrote " << out_dir << "/sweep.csv (" << sweep.rows.size() << " rows)\n";
    } else if (sens_cmd->parsed()) {
      const raysim::CalibrationResult cal = load_calibration(cfg, out_dir);
      const raysim::SensitivityReport rep = raysim::sensitivity_compare(cfg, cal);
      raysim::write_file(out_dir + "/sensitivity.json", raysim::sensitivity_json(rep));
      std::cout << "wrote " << out_dir << "/sensitivity.json\n";
    } else if (run_cmd->parsed()) {
      const raysim::CalibrationResult cal = load_calibration(cfg, out_dir);
      raysim::ExperimentResult res;
      if (plan_name == "Z" || plan_name == "square" || plan_name == "nabla") {
        res = raysim::run_experiment(cfg, cal, plan_name, out_dir);
      } else {
        // anything else is a plan file in the config format
        const raysim::ExperimentConfig plan_cfg = raysim::ExperimentConfig::load(plan_name);
        const std::string stem = std::filesystem::path(plan_name).stem().string();
        const raysim::TrajectoryPlan plan = raysim::plan_from_config(plan_cfg, cfg, cal, stem);
        res = raysim::run_experiment_plan(cfg, cal, plan, out_dir);
      }
      std::cout << res.plan.name << ": max_dev " << res.metrics.max_dev_mm << " mm, mean_dev "
                << res.metrics.mean_dev_mm << " mm, overshoot " << res.metrics.peak_overshoot_deg
                << " deg\n";
    } else if (surface_cmd->parsed()) {
      raysim::FinWaveParams params;
      raysim::write_file(out_dir + "/surface.csv",
                         surface_csv(params, surface_t_end, surface_dt, surface_step, hash));
      std::cout << "wrote " << out_dir << "/surface.csv\n";
    }
  } catch (const raysim::calibration_error& e) {
    std::cerr << "calibration error: " << e.what() << "\n";
    return kExitCalibration;
  } catch (const raysim::input_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
