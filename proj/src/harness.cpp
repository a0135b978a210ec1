#include "raysim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "raysim/errors.hpp"
#include "raysim/kinematics.hpp"
#include "raysim/version.hpp"

namespace raysim {

namespace {

std::string fmt(const char* format, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

struct SpeedModel {
  MagnetizedFin fin;
  FinOscillator osc;
  HydroParams hydro;

  double speed(double b, double f) const { return steady_speed_mm_s(b, f, fin, osc, hydro); }
  double beta(double b, double f) const {
    return steady_bending_amplitude_rad(fin, osc, b, f);
  }
};

// Hinge penalties for the calibration trend constraints. Zero when satisfied.
double trend_penalty(const SpeedModel& m, const std::vector<double>& bs,
                     const std::vector<double>& fs, std::vector<std::string>* violated) {
  double pen = 0.0;
  auto note = [&](const std::string& what) {
    if (violated &&
        std::find(violated->begin(), violated->end(), what) == violated->end())
      violated->push_back(what);
  };

  // (i) v unimodal in f with argmax 11 Hz at 5 mT
  const double b_ref = 5.0;
  std::size_t peak_idx = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (std::abs(fs[i] - 11.0) < 1e-9) peak_idx = i;
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const double lo = m.speed(b_ref, fs[i]);
    const double hi = m.speed(b_ref, fs[i + 1]);
    const double gap = i < peak_idx ? lo - hi : hi - lo;  // must ascend then descend
    if (gap > 0) {
      pen += 1e2 * gap * gap;
      note("unimodal argmax 11 Hz at 5 mT");
    }
  }
  // (ii) v monotone increasing in B at each f
  for (double f : fs)
    for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
      const double gap = m.speed(bs[i], f) - m.speed(bs[i + 1], f);
      if (gap > 0) {
        pen += 1e2 * gap * gap;
        note("monotone in B");
      }
    }
  // (iii) beta decreasing in f at fixed B
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const double gap = m.beta(b_ref, fs[i + 1]) - m.beta(b_ref, fs[i]);
    if (gap > 0) {
      pen += 1e4 * gap * gap;
      note("beta decreasing in f");
    }
  }
  return pen;
}

double objective(const SpeedModel& m, const std::vector<double>& bs,
                 const std::vector<double>& fs) {
  const double err = m.speed(5.0, 11.0) - 5.25;
  return err * err + trend_penalty(m, bs, fs, nullptr);
}

}  // namespace

CalibrationResult calibrate(const ExperimentConfig& cfg) {
  SpeedModel model{cfg.fin(), cfg.oscillator(), cfg.hydro()};
  const std::vector<double> bs = cfg.b_grid_mT();
  const std::vector<double> fs = cfg.f_grid_hz();

  // Coordinate view onto the tunable parameters.
  struct Knob {
    const char* name;
    double* value;
    double lo;
    double hi;
  };
  std::vector<Knob> knobs = {
      {"thrust_coeff", &model.hydro.thrust_coeff, 1e-14, 1e-3},
      {"drag_coeff", &model.hydro.drag_coeff, 1e-14, 1e-3},
      {"stiffness", &model.osc.stiffness_Nm, 1e-10, 1e-2},
      {"damping", &model.osc.damping_Nms, 1e-12, 1e-3},
      {"heading_omega", &model.hydro.heading_omega_rad_s, 1e-2, 1e3},
      {"heading_zeta", &model.hydro.heading_zeta, 1e-3, 0.999},
      {"field_gain", &model.hydro.field_gain_per_mT, 1e-4, 1e2},
  };

  double best = objective(model, bs, fs);
  double step = 0.25;
  bool converged = false;
  for (int pass = 0; pass < 400; ++pass) {
    const double before = best;
    for (const Knob& knob : knobs) {
      for (int dir : {+1, -1}) {
        for (;;) {
          const double saved = *knob.value;
          const double trial =
              std::clamp(saved * (dir > 0 ? 1.0 + step : 1.0 / (1.0 + step)), knob.lo, knob.hi);
          if (trial == saved) break;
          *knob.value = trial;
          const double cand = objective(model, bs, fs);
          if (cand < best - 1e-18) {
            best = cand;
          } else {
            *knob.value = saved;
            break;
          }
        }
      }
    }
    if (before - best < 1e-8) {
      if (step <= 1e-6) {
        converged = true;
        break;
      }
      step *= 0.25;
    }
  }

  CalibrationResult result;
  result.oscillator = model.osc;
  result.hydro = model.hydro;
  result.objective = best;
  result.converged = converged;
  trend_penalty(model, bs, fs, &result.violated_constraints);
  result.lump_ct_mr2 = model.hydro.thrust_coeff *
                       model.fin.remanent_magnetization_A_per_m *
                       model.fin.remanent_magnetization_A_per_m;
  return result;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  if (!cal.ok())
    throw calibration_error("sweep requires a successful calibration; run calibrate first");
  const MagnetizedFin fin = cfg.fin();
  SweepResult out;
  out.config_hash = cfg.hash();
  for (double b : cfg.b_grid_mT())
    for (double f : cfg.f_grid_hz()) {
      SweepRow row;
      row.b_mT = b;
      row.f_hz = f;
      row.beta_rad = steady_bending_amplitude_rad(fin, cal.oscillator, b, f);
      row.speed_mm_s = steady_speed_mm_s(b, f, fin, cal.oscillator, cal.hydro);
      row.advance_mm = advance_per_cycle_mm(row.speed_mm_s, f);
      out.rows.push_back(row);
    }
  return out;
}

SensitivityReport sensitivity_compare(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  if (!cal.ok())
    throw calibration_error("sensitivity comparison requires a successful calibration");
  const MagnetizedFin fin = cfg.fin();
  auto speed = [&](double b, double f) {
    return steady_speed_mm_s(b, f, fin, cal.oscillator, cal.hydro);
  };

  SensitivityReport rep;
  rep.config_hash = cfg.hash();
  const std::vector<double> group1_f = {3, 5, 7, 11};     // B = 5 mT
  const std::vector<double> group2_b = {2.25, 3, 4, 5};   // f = 7 Hz
  for (std::size_t i = 0; i + 1 < group1_f.size(); ++i) {
    SensitivityStep s;
    s.from = group1_f[i];
    s.to = group1_f[i + 1];
    s.speed_from = speed(5.0, s.from);
    s.speed_to = speed(5.0, s.to);
    s.change_mm_s = s.speed_to - s.speed_from;
    s.change_pct = 100.0 * s.change_mm_s / s.speed_from;
    rep.frequency_steps.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < group2_b.size(); ++i) {
    SensitivityStep s;
    s.from = group2_b[i];
    s.to = group2_b[i + 1];
    s.speed_from = speed(s.from, 7.0);
    s.speed_to = speed(s.to, 7.0);
    s.change_mm_s = s.speed_to - s.speed_from;
    s.change_pct = 100.0 * s.change_mm_s / s.speed_from;
    rep.field_steps.push_back(s);
  }
  return rep;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const CalibrationResult& cal,
                                const std::string& plan_name,
                                const std::optional<std::string>& out_dir) {
  return run_experiment_plan(
      cfg, cal, builtin_plan(plan_name, cfg.fin(), cal.oscillator, cal.hydro, cfg.leg_mm()),
      out_dir);
}

ExperimentResult run_experiment_plan(const ExperimentConfig& cfg, const CalibrationResult& cal,
                                     const TrajectoryPlan& plan,
                                     const std::optional<std::string>& out_dir) {
  if (!cal.ok())
    throw calibration_error("experiments require a successful calibration; run calibrate first");
  ExperimentResult res;
  res.plan = plan;
  res.record = run_plan(res.plan, cfg.fin(), cal.oscillator, cal.hydro, cfg.dt_s());
  res.metrics = deviation_metrics(res.record, res.plan.target_polyline_mm);
  res.turns = analyze_turns(res.record);

  if (out_dir) {
    const std::string hash = cfg.hash();
    std::filesystem::create_directories(*out_dir);
    write_file(*out_dir + "/trajectory_" + plan.name + ".csv", trajectory_csv(res.record, hash));
    write_file(*out_dir + "/metrics_" + plan.name + ".json", metrics_json(res, hash));
    write_file(*out_dir + "/overlay_" + plan.name + ".svg", trajectory_svg(res, hash));
  }
  return res;
}

TrajectoryPlan plan_from_config(const ExperimentConfig& plan_cfg, const ExperimentConfig& cfg,
                                const CalibrationResult& cal, const std::string& name) {
  TrajectoryPlan plan;
  plan.name = name;
  plan.drive = DriveSignal{plan_cfg.get("plan.b_xy_mt"), 0.0, plan_cfg.get("plan.b_z_mt"),
                           plan_cfg.get("plan.f_hz"), 0.0};
  plan.schedule.mode =
      plan_cfg.get("plan.mode") == 0.0 ? ScheduleMode::Distance : ScheduleMode::Time;
  const std::vector<double> amounts = plan_cfg.get_list("plan.amounts");
  const std::vector<double> yaws = plan_cfg.get_list("plan.yaws_deg");
  if (amounts.size() != yaws.size())
    throw input_error("plan.amounts and plan.yaws_deg must have equal length");
  for (std::size_t i = 0; i < amounts.size(); ++i)
    plan.schedule.segments.push_back({amounts[i], yaws[i]});
  const double v = steady_speed_mm_s(plan.drive.b_xy_mT, plan.drive.frequency_hz, cfg.fin(),
                                     cal.oscillator, cal.hydro);
  plan.target_polyline_mm = target_polyline(plan.schedule, v);
  plan.validate();
  return plan;
}

std::string trajectory_csv(const TrajectoryRecord& rec, const std::string& config_hash) {
  std::ostringstream out;
  out << "# raysim " << kVersion << "\n# config = " << config_hash << "\n";
  out << "t_s,x_mm,y_mm,psi_deg,v_mm_s,gamma_cmd_deg\n";
  for (const TrajectorySample& s : rec.samples) {
    out << fmt("%.6f", s.t_s) << ',' << fmt("%.6f", s.x_mm) << ',' << fmt("%.6f", s.y_mm) << ','
        << fmt("%.6f", rad_to_deg(s.heading_rad)) << ','
        << fmt("%.6f", std::hypot(s.vx_mm_s, s.vy_mm_s)) << ','
        << fmt("%.6f", rad_to_deg(s.yaw_cmd_rad)) << "\n";
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << "# raysim " << kVersion << "\n# config = " << sweep.config_hash << "\n";
  out << "b_mT,f_hz,speed_mm_s,beta_rad,advance_mm\n";
  for (const SweepRow& r : sweep.rows) {
    out << fmt("%.6g", r.b_mT) << ',' << fmt("%.6g", r.f_hz) << ',' << fmt("%.6f", r.speed_mm_s)
        << ',' << fmt("%.6f", r.beta_rad) << ',' << fmt("%.6f", r.advance_mm) << "\n";
  }
  return out.str();
}

std::string field_scan_csv(const TriaxialCoil& coil, const std::array<double, 3>& currents_A,
                           double half_extent_mm, double step_mm, const std::string& config_hash) {
  if (half_extent_mm < 0 || step_mm <= 0) throw input_error("bad field scan extents");
  std::ostringstream out;
  out << "# raysim " << kVersion << "\n# config = " << config_hash << "\n";
  out << "x_mm,y_mm,z_mm,Bx_mT,By_mT,Bz_mT\n";
  const int n = static_cast<int>(std::floor(half_extent_mm / step_mm));
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        const Vec3 p{i * step_mm * 1e-3, j * step_mm * 1e-3, k * step_mm * 1e-3};
        const Vec3 b = triaxial_field_T(coil, currents_A, p) * 1e3;
        out << fmt("%.6g", i * step_mm) << ',' << fmt("%.6g", j * step_mm) << ','
            << fmt("%.6g", k * step_mm) << ',' << fmt("%.9g", b.x) << ',' << fmt("%.9g", b.y)
            << ',' << fmt("%.9g", b.z) << "\n";
      }
  return out.str();
}

std::string metrics_json(const ExperimentResult& result, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = config_hash;
  j["plan"] = result.plan.name;
  j["max_dev_mm"] = result.metrics.max_dev_mm;
  j["mean_dev_mm"] = result.metrics.mean_dev_mm;
  j["peak_overshoot_deg"] = result.metrics.peak_overshoot_deg;
  j["settling_time_s"] = result.metrics.settling_time_s;
  j["turns"] = nlohmann::ordered_json::array();
  for (const TurnAnalysis& t : result.turns) {
    nlohmann::ordered_json tj;
    tj["yaw_cmd_deg"] = t.yaw_cmd_deg;
    tj["overshoot_deg"] = t.overshoot_deg;
    tj["settle_s"] = t.settle_s;
    tj["drift_deg"] = t.drift_deg;
    tj["velocity_align_s"] = t.velocity_align_s;
    tj["preturn_component_positive"] = t.preturn_component_positive;
    j["turns"].push_back(tj);
  }
  return j.dump(2) + "\n";
}

std::string sensitivity_json(const SensitivityReport& report) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = report.config_hash;
  auto dump_steps = [](const std::vector<SensitivityStep>& steps) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SensitivityStep& s : steps) {
      nlohmann::ordered_json sj;
      sj["from"] = s.from;
      sj["to"] = s.to;
      sj["speed_from_mm_s"] = s.speed_from;
      sj["speed_to_mm_s"] = s.speed_to;
      sj["change_mm_s"] = s.change_mm_s;
      sj["change_pct"] = s.change_pct;
      arr.push_back(sj);
    }
    return arr;
  };
  j["frequency_steps_at_5mT"] = dump_steps(report.frequency_steps);
  j["field_steps_at_7Hz"] = dump_steps(report.field_steps);
  return j.dump(2) + "\n";
}

std::string trajectory_svg(const ExperimentResult& result, const std::string& config_hash) {
  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  auto extend = [&](double x, double y) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  };
  for (const TrajectorySample& s : result.record.samples) extend(s.x_mm, s.y_mm);
  for (const Vec2& v : result.plan.target_polyline_mm) extend(v.x, v.y);
  const double pad = 5.0;
  const double w = (max_x - min_x) + 2 * pad;
  const double h = (max_y - min_y) + 2 * pad;
  const double scale = 10.0;  // px per mm

  // y axis flipped to screen coordinates
  auto px = [&](double x) { return fmt("%.2f", (x - min_x + pad) * scale); };
  auto py = [&](double y) { return fmt("%.2f", (max_y - y + pad) * scale); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", w * scale)
      << "\" height=\"" << fmt("%.0f", h * scale) << "\" viewBox=\"0 0 " << fmt("%.0f", w * scale)
      << ' ' << fmt("%.0f", h * scale) << "\">\n";
  out << "<!-- raysim " << kVersion << ", config = " << config_hash << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  out << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"2\" stroke-dasharray=\"8,6\" points=\"";
  for (const Vec2& v : result.plan.target_polyline_mm) out << px(v.x) << ',' << py(v.y) << ' ';
  out << "\"/>\n";

  out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  const std::size_t stride = std::max<std::size_t>(1, result.record.samples.size() / 4000);
  for (std::size_t i = 0; i < result.record.samples.size(); i += stride) {
    const TrajectorySample& s = result.record.samples[i];
    out << px(s.x_mm) << ',' << py(s.y_mm) << ' ';
  }
  const TrajectorySample& last = result.record.samples.back();
  out << px(last.x_mm) << ',' << py(last.y_mm);
  out << "\"/>\n";

  out << "<text x=\"8\" y=\"16\" font-family=\"monospace\" font-size=\"12\">" << result.plan.name
      << " max_dev=" << fmt("%.3f", result.metrics.max_dev_mm) << " mm</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string calibration_json(const CalibrationResult& cal, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = config_hash;
  j["converged"] = cal.converged;
  j["objective"] = cal.objective;
  j["violated_constraints"] = cal.violated_constraints;
  j["lump_ct_mr2"] = cal.lump_ct_mr2;
  j["osc.inertia_kgm2"] = cal.oscillator.inertia_kgm2;
  j["osc.damping_nms"] = cal.oscillator.damping_Nms;
  j["osc.stiffness_nm"] = cal.oscillator.stiffness_Nm;
  j["osc.beta_max_rad"] = cal.oscillator.max_deflection_rad;
  j["hydro.mass_eff_kg"] = cal.hydro.mass_eff_kg;
  j["hydro.thrust_coeff"] = cal.hydro.thrust_coeff;
  j["hydro.drag_coeff"] = cal.hydro.drag_coeff;
  j["hydro.heading_omega_rad_s"] = cal.hydro.heading_omega_rad_s;
  j["hydro.heading_zeta"] = cal.hydro.heading_zeta;
  j["hydro.field_gain_per_mt"] = cal.hydro.field_gain_per_mT;
  return j.dump(2) + "\n";
}

CalibrationResult parse_calibration_json(const std::string& text, const ExperimentConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("bad calibration file: ") + e.what());
  }
  CalibrationResult cal;
  cal.oscillator = cfg.oscillator();
  cal.hydro = cfg.hydro();
  try {
    cal.converged = j.at("converged").get<bool>();
    cal.objective = j.at("objective").get<double>();
    cal.violated_constraints = j.at("violated_constraints").get<std::vector<std::string>>();
    cal.lump_ct_mr2 = j.at("lump_ct_mr2").get<double>();
    cal.oscillator.inertia_kgm2 = j.at("osc.inertia_kgm2").get<double>();
    cal.oscillator.damping_Nms = j.at("osc.damping_nms").get<double>();
    cal.oscillator.stiffness_Nm = j.at("osc.stiffness_nm").get<double>();
    cal.oscillator.max_deflection_rad = j.at("osc.beta_max_rad").get<double>();
    cal.hydro.mass_eff_kg = j.at("hydro.mass_eff_kg").get<double>();
    cal.hydro.thrust_coeff = j.at("hydro.thrust_coeff").get<double>();
    cal.hydro.drag_coeff = j.at("hydro.drag_coeff").get<double>();
    cal.hydro.heading_omega_rad_s = j.at("hydro.heading_omega_rad_s").get<double>();
    cal.hydro.heading_zeta = j.at("hydro.heading_zeta").get<double>();
    cal.hydro.field_gain_per_mT = j.at("hydro.field_gain_per_mt").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("incomplete calibration file: ") + e.what());
  }
  return cal;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  out << contents;
}

}  // namespace raysim
