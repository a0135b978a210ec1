// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "raysim/control.hpp"
#include "raysim/field.hpp"
#include "raysim/harness.hpp"
#include "raysim/kinematics.hpp"

using namespace raysim;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Checker {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  bool pass() const { return failures.empty(); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int g_failed = 0;

void report(int index, const std::string& name, const Checker& c, double elapsed_s) {
  std::printf("criterion %d: %s  [%s, %.2f s]\n", index, c.pass() ? "PASS" : "FAIL", name.c_str(),
              elapsed_s);
  for (const std::string& f : c.failures) std::printf("    - %s\n", f.c_str());
  if (!c.pass()) ++g_failed;
}

std::string fmt3(double a, double b, double c) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%g, %g, %g)", a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_electromagnetics() {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> um(-1e5, 1e5);
  std::uniform_real_distribution<double> ub(-1e-2, 1e-2);
  std::uniform_real_distribution<double> ug(-1.0, 1.0);
  std::uniform_real_distribution<double> uv(1e-10, 1e-8);

  for (int i = 0; i < 1000; ++i) {
    const Vec3 m{um(rng), um(rng), um(rng)};
    const Vec3 b{ub(rng), ub(rng), ub(rng)};
    Mat3 g;
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) g(r, s) = ug(rng);
    const double v = uv(rng);

    // independent component-wise evaluation
    const Vec3 tau_ref{v * (m.y * b.z - m.z * b.y), v * (m.z * b.x - m.x * b.z),
                       v * (m.x * b.y - m.y * b.x)};
    Vec3 f_ref{};
    f_ref.x = v * (m.x * g(0, 0) + m.y * g(0, 1) + m.z * g(0, 2));
    f_ref.y = v * (m.x * g(1, 0) + m.y * g(1, 1) + m.z * g(1, 2));
    f_ref.z = v * (m.x * g(2, 0) + m.y * g(2, 1) + m.z * g(2, 2));

    const Vec3 tau = magnetic_torque_Nm(m, b, v);
    const Vec3 f = magnetic_force_N(m, g, v);
    if ((tau - tau_ref).norm() > 1e-12 * tau_ref.norm())
      c.expect(false, "torque mismatch beyond 1e-12 relative");
    if ((f - f_ref).norm() > 1e-12 * f_ref.norm())
      c.expect(false, "force mismatch beyond 1e-12 relative");
  }
  {
    const Vec3 m{um(rng), um(rng), um(rng)};
    // power-of-two scale keeps B exactly parallel to M in floating point
    c.expect(magnetic_torque_Nm(m, m * 0x1p-25, 1e-9).norm() == 0.0,
             "parallel M and B must give zero torque");
    c.expect(magnetic_force_N(m, Mat3{}, 1e-9).norm() == 0.0,
             "uniform field must give zero force");
  }
  const double dt = seconds_since(t0);
  c.expect(dt < 1.0, "runtime exceeded 1 s");
  report(1, "torque/force cross-checks on 1000 random samples", c, dt);
}

void criterion_2_helmholtz_center() {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const TriaxialCoil coil = TriaxialCoil::standard();
  for (const CoilAxis* axis : {&coil.x, &coil.y, &coil.z}) {
    const double expected =
        kMu0 * std::pow(0.8, 1.5) * axis->turns / (axis->effective_radius_mm * 1e-3);
    const double b720 = pair_field_T(*axis, 1.0, {}, 720).norm();
    const double b1440 = pair_field_T(*axis, 1.0, {}, 1440).norm();
    if (std::abs(b720 - expected) / expected > 1e-3)
      c.expect(false, "center field off the closed form by > 0.1%");
    if (std::abs(b1440 - b720) / b720 > 5e-5)
      c.expect(false, "segment doubling moved the center field by > 0.005%");
  }
  const double dt = seconds_since(t0);
  c.expect(dt < 1.0, "runtime exceeded 1 s");
  report(2, "Helmholtz center field vs mu0*(4/5)^1.5*N*I/R", c, dt);
}

void criterion_3_homogeneity() {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const TriaxialCoil coil = TriaxialCoil::standard();
  const std::array<double, 3> currents{1.0, 1.0, 1.0};
  const double step = 2.0;

  const HomogeneityBox b1 = homogeneity_volume(coil, currents, 0.01, step);
  const HomogeneityBox b2 = homogeneity_volume(coil, currents, 0.02, step);
  const HomogeneityBox b5 = homogeneity_volume(coil, currents, 0.05, step);
  std::printf("    boxes: 1%% %s  2%% %s  5%% %s mm\n", fmt3(b1.dx_mm, b1.dy_mm, b1.dz_mm).c_str(),
              fmt3(b2.dx_mm, b2.dy_mm, b2.dz_mm).c_str(),
              fmt3(b5.dx_mm, b5.dy_mm, b5.dz_mm).c_str());

  c.expect(b1.dx_mm < b2.dx_mm && b2.dx_mm < b5.dx_mm, "x dims not strictly nested");
  c.expect(b1.dy_mm < b2.dy_mm && b2.dy_mm < b5.dy_mm, "y dims not strictly nested");
  c.expect(b1.dz_mm < b2.dz_mm && b2.dz_mm < b5.dz_mm, "z dims not strictly nested");

  struct Ref {
    const char* label;
    const HomogeneityBox* got;
    double rx, ry, rz;
  };
  const Ref refs[] = {{"1%", &b1, 42, 60, 80}, {"2%", &b2, 51, 71, 96}, {"5%", &b5, 63, 88, 119}};
  for (const Ref& r : refs) {
    const double dims[3] = {r.got->dx_mm, r.got->dy_mm, r.got->dz_mm};
    const double refs_mm[3] = {r.rx, r.ry, r.rz};
    const char* names[3] = {"x", "y", "z"};
    for (int d = 0; d < 3; ++d) {
      const bool in_band = dims[d] >= 0.7 * refs_mm[d] && dims[d] <= 1.3 * refs_mm[d];
      char msg[128];
      std::snprintf(msg, sizeof(msg), "%s box %s dim %.0f mm outside +-30%% of %.0f mm", r.label,
                    names[d], dims[d], refs_mm[d]);
      c.expect(in_band, msg);
    }
  }
  const double dt = seconds_since(t0);
  c.expect(dt < 120.0, "runtime exceeded 2 min");
  report(3, "homogeneity working volumes at 2 mm grid", c, dt);
}

void criterion_4_speed_map(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const MagnetizedFin fin = cfg.fin();
  auto speed = [&](double b, double f) {
    return steady_speed_mm_s(b, f, fin, cal.oscillator, cal.hydro);
  };

  c.expect(cal.ok(), "calibration did not converge cleanly");

  const double v_peak = speed(5.0, 11.0);
  c.expect(std::abs(v_peak - 5.25) / 5.25 <= 0.02, "v(5 mT, 11 Hz) misses 5.25 mm/s by > 2%");

  const std::vector<double> fs = cfg.f_grid_hz();
  const std::vector<double> bs = cfg.b_grid_mT();
  std::size_t peak_idx = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (fs[i] == 11.0) peak_idx = i;
  for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
    const double lo = speed(5.0, fs[i]);
    const double hi = speed(5.0, fs[i + 1]);
    if (i < peak_idx)
      c.expect(lo < hi, "speed not rising toward 11 Hz at 5 mT");
    else
      c.expect(hi < lo, "speed not falling past 11 Hz at 5 mT");
  }
  c.expect(speed(5.0, 13.0) < speed(5.0, 11.0), "v(13) !< v(11)");
  c.expect(speed(5.0, 15.0) < speed(5.0, 13.0), "v(15) !< v(13)");

  for (double f : fs)
    for (std::size_t i = 0; i + 1 < bs.size(); ++i)
      c.expect(speed(bs[i], f) < speed(bs[i + 1], f), "speed not monotone in B");

  // 35-cell grid runtime
  const auto grid_t0 = std::chrono::steady_clock::now();
  const SweepResult sweep = run_sweep(cfg, cal);
  const double grid_dt = seconds_since(grid_t0);
  c.expect(sweep.rows.size() == 35, "grid is not the 5 x 7 experiment grid");
  c.expect(grid_dt < 30.0, "35-cell grid exceeded 30 s");

  double peak = 0.0;
  for (const SweepRow& r : sweep.rows) peak = std::max(peak, r.speed_mm_s);
  const double bl_per_s = peak / cfg.get("geometry.body_length_mm");
  c.expect(bl_per_s >= 0.4 && bl_per_s <= 0.55, "peak speed not ~0.5 body lengths per second");

  report(4, "speed map reproduction after calibration", c, seconds_since(t0));
}

void criterion_5_fin_response(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const MagnetizedFin fin = cfg.fin();
  const FinOscillator osc = cal.oscillator;

  for (double b : cfg.b_grid_mT()) {
    double prev = 1e300;
    for (double f : cfg.f_grid_hz()) {
      const double beta = steady_bending_amplitude_rad(fin, osc, b, f);
      c.expect(beta < prev, "beta not strictly decreasing in f");
      prev = beta;
    }
  }
  {
    double prev = 0.0;
    for (double b : cfg.b_grid_mT()) {
      const double beta = steady_bending_amplitude_rad(fin, osc, b, 1.0);
      c.expect(beta > prev, "beta not strictly increasing in B at 1 Hz");
      prev = beta;
    }
  }

  // time-domain equivalence after 20 forcing cycles
  const double f = 1.0;
  const double tau0 = fin.volume_m3 * fin.remanent_magnetization_A_per_m * 5e-3;
  auto torque = [&](double t) { return tau0 * std::sin(2.0 * kPi * f * t); };
  const double dt = 1.0 / (400.0 * f);
  FinState s{};
  double t = 0.0;
  double peak = 0.0;
  while (t < 20.0 / f - 1e-12) {
    s = step_fin(osc, s, torque, t, dt);
    t += dt;
    if (t > 19.0 / f) peak = std::max(peak, std::abs(s.angle_rad));
  }
  const double closed = steady_bending_amplitude_rad(fin, osc, 5.0, f);
  c.expect(std::abs(peak - closed) / closed <= 0.01,
           "time-domain amplitude off the closed form by > 1%");

  report(5, "fin response trends and ODE equivalence", c, seconds_since(t0));
}

void criterion_6_sensitivity(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const SensitivityReport rep = sensitivity_compare(cfg, cal);
  // steps are index-paired between the two groups; a frequency step belongs to
  // the low- or high-frequency regime by its starting frequency
  for (std::size_t i = 0; i < rep.frequency_steps.size(); ++i) {
    const double df = rep.frequency_steps[i].change_mm_s;
    const double db = rep.field_steps[i].change_mm_s;
    char msg[160];
    if (rep.frequency_steps[i].from >= 7.0) {
      std::snprintf(msg, sizeof(msg),
                    "step %zu (f >= 7 Hz): frequency change %.3f must exceed field change %.3f",
                    i, df, db);
      c.expect(df > db, msg);
    } else {
      const double ratio = df > db ? df / db : db / df;
      std::snprintf(msg, sizeof(msg),
                    "step %zu (f <= 5 Hz): changes %.3f vs %.3f differ by more than 2x", i, df,
                    db);
      c.expect(ratio <= 2.0, msg);
    }
  }
  report(6, "frequency vs field-strength sensitivity ordering", c, seconds_since(t0));
}

TrajectoryPlan step_turn_plan(double b_mT, double turn_deg) {
  TrajectoryPlan plan;
  plan.name = "turn";
  plan.drive = DriveSignal{b_mT, 0.0, b_mT, 11.0, 0.0};
  plan.schedule.mode = ScheduleMode::Distance;
  plan.schedule.segments = {{25.0, 0.0}, {25.0, turn_deg}};
  plan.target_polyline_mm = target_polyline(plan.schedule, 1.0);
  return plan;
}

void criterion_7_steering(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const MagnetizedFin fin = cfg.fin();

  double prev_drift = 1e300, prev_settle = 1e300, prev_align = 1e300;
  std::printf("    30 deg turn:  B    overshoot  settle   drift   v-align\n");
  for (double b : cfg.b_grid_mT()) {
    const TrajectoryPlan plan = step_turn_plan(b, 30.0);
    const TrajectoryRecord rec = run_plan(plan, fin, cal.oscillator, cal.hydro, cfg.dt_s());
    const std::vector<TurnAnalysis> turns = analyze_turns(rec);
    if (turns.size() != 1) {
      c.expect(false, "expected exactly one turn event");
      continue;
    }
    const TurnAnalysis& a = turns.front();
    std::printf("                %4.2f   %7.2f   %6.2f  %6.3f   %6.2f\n", b, a.overshoot_deg,
                a.settle_s, a.drift_deg, a.velocity_align_s);
    c.expect(a.overshoot_deg > 0.0, "heading did not overshoot the target");
    c.expect(a.preturn_component_positive,
             "velocity lost its pre-turn component during early settling");
    c.expect(a.drift_deg < prev_drift, "drift magnitude not strictly decreasing in B");
    c.expect(a.settle_s < prev_settle, "settling time not strictly decreasing in B");
    c.expect(a.velocity_align_s < prev_align, "velocity alignment not strictly faster with B");
    prev_drift = a.drift_deg;
    prev_settle = a.settle_s;
    prev_align = a.velocity_align_s;
  }
  report(7, "steering response and inertia error phenomenology", c, seconds_since(t0));
}

void criterion_8_trajectories(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const MagnetizedFin fin = cfg.fin();

  double dev_z = 0.0, dev_sq = 0.0, dev_nb = 0.0;
  for (const char* name : {"Z", "square", "nabla"}) {
    const ExperimentResult res = run_experiment(cfg, cal, name);
    if (std::string(name) == "Z") dev_z = res.metrics.max_dev_mm;
    if (std::string(name) == "square") dev_sq = res.metrics.max_dev_mm;
    if (std::string(name) == "nabla") dev_nb = res.metrics.max_dev_mm;
  }
  std::printf("    max_dev: square %.3f  Z %.3f  nabla %.3f mm\n", dev_sq, dev_z, dev_nb);
  c.expect(dev_sq < dev_z, "square deviation not below Z");
  c.expect(dev_z < dev_nb, "Z deviation not below nabla");

  // decomposed vs single 60 degree turn
  const double v = steady_speed_mm_s(4.0, 11.0, fin, cal.oscillator, cal.hydro);
  const double leg_s = 20.0 / v;
  const double we = std::sqrt(cal.hydro.field_gain_per_mT * 4.0) * cal.hydro.heading_omega_rad_s;
  const double dwell =
      1.1 * kPi / (we * std::sqrt(1.0 - cal.hydro.heading_zeta * cal.hydro.heading_zeta));

  TrajectoryPlan single;
  single.name = "single60";
  single.drive = DriveSignal{4.0, 0.0, 4.0, 11.0, 0.0};
  single.schedule.mode = ScheduleMode::Time;
  single.schedule.segments = {{leg_s, 0.0}, {leg_s, 60.0}};
  single.target_polyline_mm = target_polyline(single.schedule, v);

  TrajectoryPlan decomp = single;
  decomp.name = "decomposed60";
  const YawSchedule frag = decompose_turn(60.0, 2, dwell);
  decomp.schedule.segments = {{leg_s, 0.0},
                              {frag.segments[0].amount, frag.segments[0].yaw_deg},
                              {leg_s, frag.segments[1].yaw_deg}};
  decomp.target_polyline_mm = target_polyline(decomp.schedule, v);

  const double dev_single =
      deviation_metrics(run_plan(single, fin, cal.oscillator, cal.hydro, cfg.dt_s()),
                        single.target_polyline_mm)
          .max_dev_mm;
  const double dev_decomp =
      deviation_metrics(run_plan(decomp, fin, cal.oscillator, cal.hydro, cfg.dt_s()),
                        decomp.target_polyline_mm)
          .max_dev_mm;
  std::printf("    60 deg turn: single %.3f  decomposed %.3f mm\n", dev_single, dev_decomp);
  c.expect(dev_decomp < dev_single, "decomposed turn not strictly better than a single turn");

  report(8, "trajectory error ordering and steering decomposition", c, seconds_since(t0));
}

void criterion_9_determinism(const ExperimentConfig& cfg, const CalibrationResult& cal) {
  const auto t0 = std::chrono::steady_clock::now();
  Checker c;
  const MagnetizedFin fin = cfg.fin();

  // byte-identical reruns, including a fresh calibration
  const CalibrationResult cal2 = calibrate(cfg);
  c.expect(calibration_json(cal, cfg.hash()) == calibration_json(cal2, cfg.hash()),
           "calibration rerun not byte-identical");
  c.expect(sweep_csv(run_sweep(cfg, cal)) == sweep_csv(run_sweep(cfg, cal2)),
           "sweep rerun not byte-identical");
  const ExperimentResult e1 = run_experiment(cfg, cal, "Z");
  const ExperimentResult e2 = run_experiment(cfg, cal2, "Z");
  c.expect(trajectory_csv(e1.record, cfg.hash()) == trajectory_csv(e2.record, cfg.hash()),
           "trajectory rerun not byte-identical");

  // halving dt moves the final position by < 0.1 mm
  const TrajectoryPlan plan = builtin_plan("Z", fin, cal.oscillator, cal.hydro, cfg.leg_mm());
  const TrajectoryRecord r1 = run_plan(plan, fin, cal.oscillator, cal.hydro, 1e-3);
  const TrajectoryRecord r2 = run_plan(plan, fin, cal.oscillator, cal.hydro, 5e-4);
  const TrajectorySample& a = r1.samples.back();
  const TrajectorySample& b = r2.samples.back();
  const double move = std::hypot(a.x_mm - b.x_mm, a.y_mm - b.y_mm);
  std::printf("    dt halving final-position shift: %.6f mm\n", move);
  c.expect(move < 0.1, "dt halving moved the final position by >= 0.1 mm");

  // rotational equivariance of the whole trajectory
  const double delta = 30.0;
  TrajectoryPlan rotated = plan;
  for (YawSegment& s : rotated.schedule.segments) s.yaw_deg += delta;
  rotated.target_polyline_mm = target_polyline(rotated.schedule, 1.0);
  const TrajectoryRecord rr = run_plan(rotated, fin, cal.oscillator, cal.hydro, 1e-3);
  const double th = deg_to_rad(delta);
  const double ex = a.x_mm * std::cos(th) - a.y_mm * std::sin(th);
  const double ey = a.x_mm * std::sin(th) + a.y_mm * std::cos(th);
  const TrajectorySample& rl = rr.samples.back();
  const double rot_err = std::hypot(rl.x_mm - ex, rl.y_mm - ey);
  std::printf("    rotational equivariance error: %.3e mm\n", rot_err);
  c.expect(rot_err < 1e-6, "rotating the plan did not rotate the trajectory");

  report(9, "determinism, dt convergence and equivariance", c, seconds_since(t0));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_1_electromagnetics();
  criterion_2_helmholtz_center();
  criterion_3_homogeneity();

  const ExperimentConfig cfg;
  const CalibrationResult cal = calibrate(cfg);
  criterion_4_speed_map(cfg, cal);
  criterion_5_fin_response(cfg, cal);
  criterion_6_sensitivity(cfg, cal);
  criterion_7_steering(cfg, cal);
  criterion_8_trajectories(cfg, cal);
  criterion_9_determinism(cfg, cal);

  std::printf("================\n%d criteria failed\n", g_failed);
  return g_failed;
}
