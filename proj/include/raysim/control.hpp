#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "raysim/field.hpp"
#include "raysim/locomotion.hpp"

namespace raysim {

enum class ScheduleMode { Distance, Time };

struct YawSegment {
  double amount = 0.0;   // leg length (mm) or duration (s) depending on mode
  double yaw_deg = 0.0;  // commanded field yaw, (-180, 180]
};

struct YawSchedule {
  ScheduleMode mode = ScheduleMode::Distance;
  std::vector<YawSegment> segments;

  void validate() const;
};

// Splits one turn into `steps` equal increments, each held for `dwell`.
// Returned yaw values are cumulative offsets from the pre-turn yaw, so the
// last segment sits exactly at delta_deg.
YawSchedule decompose_turn(double delta_deg, int steps, double dwell_s);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct TrajectoryPlan {
  std::string name;
  YawSchedule schedule;
  DriveSignal drive;
  std::vector<Vec2> target_polyline_mm;

  void validate() const;
};

// Construct the target polyline implied by a schedule, anchored at the origin.
// Time-based segments convert duration to distance at the plan's steady speed.
std::vector<Vec2> target_polyline(const YawSchedule& schedule, double steady_speed_mm_s);

// The three yaw-schedule experiments. All run at B = 4 mT, f = 11 Hz, pitch 45
// degrees. The square's corner-cut legs are sized to half the damped heading
// period (times 1.1), which makes its two-step corners act as a vibration-
// cancelling decomposition.
TrajectoryPlan builtin_plan(const std::string& name, const MagnetizedFin& fin,
                            const FinOscillator& osc, const HydroParams& hydro,
                            double leg_mm = 20.0);

// Custom plans travel as config-format text under plan.* keys.
std::string plan_to_config_text(const TrajectoryPlan& plan);

struct TrajectorySample {
  double t_s = 0.0;
  double x_mm = 0.0;
  double y_mm = 0.0;
  double heading_rad = 0.0;
  double vx_mm_s = 0.0;
  double vy_mm_s = 0.0;
  double yaw_cmd_rad = 0.0;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  std::vector<std::size_t> switch_indices;  // first sample of each later segment
};

// Integrate a plan with the fixed-step body model, starting aligned with the
// first commanded yaw at the steady speed.
TrajectoryRecord run_plan(const TrajectoryPlan& plan, const MagnetizedFin& fin,
                          const FinOscillator& osc, const HydroParams& hydro, double dt_s = 1e-3);

struct DeviationMetrics {
  double max_dev_mm = 0.0;
  double mean_dev_mm = 0.0;
  double peak_overshoot_deg = 0.0;  // worst heading excess beyond a commanded yaw
  double settling_time_s = 0.0;     // worst per-turn 2-degree settling time
};

DeviationMetrics deviation_metrics(const TrajectoryRecord& traj, const std::vector<Vec2>& target,
                                   double settle_band_deg = 2.0);

// Per-turn steering-error decomposition. The drift phase starts once the
// heading has settled; drift is the residual misalignment of the velocity
// vector with the commanded direction.
struct TurnAnalysis {
  double yaw_cmd_deg = 0.0;
  double overshoot_deg = 0.0;
  double settle_s = 0.0;
  double drift_deg = 0.0;
  double velocity_align_s = 0.0;
  bool preturn_component_positive = false;
};

std::vector<TurnAnalysis> analyze_turns(const TrajectoryRecord& traj,
                                        double settle_band_deg = 2.0);

double point_to_polyline_mm(const Vec2& p, const std::vector<Vec2>& poly);

}  // namespace raysim
