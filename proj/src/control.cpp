#include "raysim/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "raysim/errors.hpp"

namespace raysim {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}
}  // namespace

void YawSchedule::validate() const {
  require(!segments.empty(), "schedule needs at least one segment");
  for (const YawSegment& s : segments) {
    require(s.amount > 0, "segment lengths/durations must be positive");
    require(s.yaw_deg > -180.0 - 1e-9 && s.yaw_deg <= 180.0 + 1e-9, "yaw outside (-180, 180]");
  }
}

YawSchedule decompose_turn(double delta_deg, int steps, double dwell_s) {
  require(steps >= 1, "decomposition needs at least one step");
  require(dwell_s > 0, "dwell must be positive");
  YawSchedule frag;
  frag.mode = ScheduleMode::Time;
  frag.segments.reserve(static_cast<size_t>(steps));
  for (int k = 1; k <= steps; ++k)
    frag.segments.push_back({dwell_s, delta_deg * static_cast<double>(k) / steps});
  return frag;
}

void TrajectoryPlan::validate() const {
  schedule.validate();
  drive.validate();
  require(target_polyline_mm.size() == schedule.segments.size() + 1,
          "target polyline must have one vertex per segment boundary");
}

std::vector<Vec2> target_polyline(const YawSchedule& schedule, double steady_speed_mm_s) {
  schedule.validate();
  std::vector<Vec2> pts{{0.0, 0.0}};
  for (const YawSegment& s : schedule.segments) {
    const double len =
        schedule.mode == ScheduleMode::Distance ? s.amount : s.amount * steady_speed_mm_s;
    const double g = deg_to_rad(s.yaw_deg);
    pts.push_back({pts.back().x + len * std::cos(g), pts.back().y + len * std::sin(g)});
  }
  return pts;
}

TrajectoryPlan builtin_plan(const std::string& name, const MagnetizedFin& fin,
                            const FinOscillator& osc, const HydroParams& hydro, double leg_mm) {
  require(leg_mm > 0, "leg length must be positive");
  TrajectoryPlan plan;
  plan.name = name;
  plan.drive = DriveSignal{4.0, 0.0, 4.0, 11.0, 0.0};  // pitch = 45 deg
  plan.schedule.mode = ScheduleMode::Distance;

  const double v = steady_speed_mm_s(plan.drive.b_xy_mT, plan.drive.frequency_hz, fin, osc, hydro);
  if (name == "Z") {
    plan.schedule.segments = {{leg_mm, 0.0}, {leg_mm, -45.0}, {leg_mm, 0.0}};
  } else if (name == "square") {
    const double we = std::sqrt(hydro.field_gain_per_mT * plan.drive.b_xy_mT) *
                      hydro.heading_omega_rad_s;
    const double half_period = kPi / (we * std::sqrt(1.0 - hydro.heading_zeta * hydro.heading_zeta));
    const double cut = 1.1 * v * half_period;
    plan.schedule.segments = {{leg_mm, 0.0},   {cut, -45.0}, {leg_mm, -90.0}, {cut, -135.0},
                              {leg_mm, 180.0}, {cut, 135.0}, {leg_mm, 90.0}};
  } else if (name == "nabla") {
    plan.schedule.segments = {{leg_mm, -45.0}, {leg_mm, 75.0}, {leg_mm, -165.0}};
  } else {
    throw input_error("unknown plan '" + name + "' (expected Z, square or nabla)");
  }
  plan.target_polyline_mm = target_polyline(plan.schedule, v);
  plan.validate();
  return plan;
}

std::string plan_to_config_text(const TrajectoryPlan& plan) {
  plan.validate();
  std::string out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out += "plan.mode = " + std::string(plan.schedule.mode == ScheduleMode::Time ? "1" : "0") + "\n";
  out += "plan.b_xy_mt = " + num(plan.drive.b_xy_mT) + "\n";
  out += "plan.b_z_mt = " + num(plan.drive.b_z_mT) + "\n";
  out += "plan.f_hz = " + num(plan.drive.frequency_hz) + "\n";
  out += "plan.amounts = ";
  for (std::size_t i = 0; i < plan.schedule.segments.size(); ++i)
    out += (i ? "," : "") + num(plan.schedule.segments[i].amount);
  out += "\nplan.yaws_deg = ";
  for (std::size_t i = 0; i < plan.schedule.segments.size(); ++i)
    out += (i ? "," : "") + num(plan.schedule.segments[i].yaw_deg);
  out += "\n";
  return out;
}

TrajectoryRecord run_plan(const TrajectoryPlan& plan, const MagnetizedFin& fin,
                          const FinOscillator& osc, const HydroParams& hydro, double dt_s) {
  plan.validate();
  require(dt_s > 0, "time step must be positive");

  const double b = plan.drive.b_xy_mT;
  const double f = plan.drive.frequency_hz;
  const double v0 = steady_speed_mm_s(b, f, fin, osc, hydro);

  BodyState s;
  s.heading_rad = deg_to_rad(plan.schedule.segments.front().yaw_deg);
  s.vx_mm_s = v0 * std::cos(s.heading_rad);
  s.vy_mm_s = v0 * std::sin(s.heading_rad);

  TrajectoryRecord rec;
  double t = 0.0;
  std::size_t seg = 0;
  double acc = 0.0;  // arc length (mm) or time (s) within the segment
  double gamma = deg_to_rad(plan.schedule.segments[seg].yaw_deg);
  rec.samples.push_back({t, s.x_mm, s.y_mm, s.heading_rad, s.vx_mm_s, s.vy_mm_s, gamma});

  const double t_limit = 600.0;
  while (seg < plan.schedule.segments.size() && t < t_limit) {
    const BodyState next = step_body(s, gamma, b, f, dt_s, fin, osc, hydro);
    acc += plan.schedule.mode == ScheduleMode::Distance
               ? std::hypot(next.x_mm - s.x_mm, next.y_mm - s.y_mm)
               : dt_s;
    s = next;
    t += dt_s;
    rec.samples.push_back({t, s.x_mm, s.y_mm, s.heading_rad, s.vx_mm_s, s.vy_mm_s, gamma});
    if (acc >= plan.schedule.segments[seg].amount) {
      acc = 0.0;
      ++seg;
      if (seg < plan.schedule.segments.size()) {
        gamma = deg_to_rad(plan.schedule.segments[seg].yaw_deg);
        rec.switch_indices.push_back(rec.samples.size() - 1);
        rec.samples.back().yaw_cmd_rad = gamma;
      }
    }
  }
  return rec;
}

double point_to_polyline_mm(const Vec2& p, const std::vector<Vec2>& poly) {
  require(poly.size() >= 2, "polyline needs at least two vertices");
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const double abx = poly[i + 1].x - poly[i].x;
    const double aby = poly[i + 1].y - poly[i].y;
    const double apx = p.x - poly[i].x;
    const double apy = p.y - poly[i].y;
    const double len2 = abx * abx + aby * aby;
    double tt = len2 > 0.0 ? (apx * abx + apy * aby) / len2 : 0.0;
    tt = std::clamp(tt, 0.0, 1.0);
    const double dx = apx - tt * abx;
    const double dy = apy - tt * aby;
    best = std::min(best, std::sqrt(dx * dx + dy * dy));
  }
  return best;
}

namespace {

struct TurnWindow {
  std::size_t begin;  // sample index of the switch
  std::size_t end;    // one past the window (next switch or record end)
  double yaw_new_rad;
  double yaw_old_rad;
};

std::vector<TurnWindow> turn_windows(const TrajectoryRecord& traj) {
  std::vector<TurnWindow> out;
  for (std::size_t w = 0; w < traj.switch_indices.size(); ++w) {
    const std::size_t i = traj.switch_indices[w];
    const std::size_t end =
        w + 1 < traj.switch_indices.size() ? traj.switch_indices[w + 1] : traj.samples.size();
    out.push_back({i, end, traj.samples[i].yaw_cmd_rad,
                   traj.samples[i > 0 ? i - 1 : 0].yaw_cmd_rad});
  }
  return out;
}

}  // namespace

DeviationMetrics deviation_metrics(const TrajectoryRecord& traj, const std::vector<Vec2>& target,
                                   double settle_band_deg) {
  if (traj.samples.size() < 2) throw analysis_error("degenerate single-point trajectory");
  DeviationMetrics m;
  double sum = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    const double d = point_to_polyline_mm({s.x_mm, s.y_mm}, target);
    m.max_dev_mm = std::max(m.max_dev_mm, d);
    sum += d;
  }
  m.mean_dev_mm = sum / static_cast<double>(traj.samples.size());

  for (const TurnAnalysis& turn : analyze_turns(traj, settle_band_deg)) {
    m.peak_overshoot_deg = std::max(m.peak_overshoot_deg, turn.overshoot_deg);
    m.settling_time_s = std::max(m.settling_time_s, turn.settle_s);
  }
  return m;
}

std::vector<TurnAnalysis> analyze_turns(const TrajectoryRecord& traj, double settle_band_deg) {
  std::vector<TurnAnalysis> out;
  const double band = deg_to_rad(settle_band_deg);
  for (const TurnWindow& w : turn_windows(traj)) {
    TurnAnalysis a;
    a.yaw_cmd_deg = rad_to_deg(w.yaw_new_rad);
    const double turn_dir = wrap_angle(w.yaw_new_rad - w.yaw_old_rad) >= 0 ? 1.0 : -1.0;
    const double t0 = traj.samples[w.begin].t_s;

    double settle_end = t0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
      const TrajectorySample& s = traj.samples[i];
      const double err = wrap_angle(s.heading_rad - w.yaw_new_rad);
      a.overshoot_deg = std::max(a.overshoot_deg, rad_to_deg(turn_dir * err));
      if (std::abs(err) > band) settle_end = s.t_s;
    }
    a.settle_s = settle_end - t0;

    const double pre_x = std::cos(w.yaw_old_rad), pre_y = std::sin(w.yaw_old_rad);
    a.preturn_component_positive = true;
    double align_end = t0;
    for (std::size_t i = w.begin; i < w.end; ++i) {
      const TrajectorySample& s = traj.samples[i];
      const double vdir = std::atan2(s.vy_mm_s, s.vx_mm_s);
      const double verr = wrap_angle(vdir - w.yaw_new_rad);
      if (std::abs(verr) > band) align_end = s.t_s;
      if (s.t_s >= t0 + a.settle_s)
        a.drift_deg = std::max(a.drift_deg, std::abs(rad_to_deg(verr)));
      if (s.t_s <= t0 + 0.25 * a.settle_s &&
          s.vx_mm_s * pre_x + s.vy_mm_s * pre_y <= 0.0)
        a.preturn_component_positive = false;
    }
    a.velocity_align_s = align_end - t0;
    out.push_back(a);
  }
  return out;
}

}  // namespace raysim
