#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raysim/config.hpp"
#include "raysim/control.hpp"

namespace raysim {

struct CalibrationResult {
  FinOscillator oscillator;
  HydroParams hydro;
  double objective = 0.0;
  bool converged = false;
  std::vector<std::string> violated_constraints;
  double lump_ct_mr2 = 0.0;  // C_t * M_r^2

  bool ok() const { return converged && violated_constraints.empty(); }
};

// Fits the speed model to the peak target v(5 mT, 11 Hz) = 5.25 mm/s under
// trend-constraint penalties (unimodal in f with argmax 11 Hz at 5 mT,
// monotone in B, fin amplitude decreasing in f). Deterministic cyclic
// coordinate descent; converged when a full pass improves the objective by
// less than 1e-8.
CalibrationResult calibrate(const ExperimentConfig& cfg);

struct SweepRow {
  double b_mT = 0.0;
  double f_hz = 0.0;
  double speed_mm_s = 0.0;
  double beta_rad = 0.0;
  double advance_mm = 0.0;  // per-cycle advance
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order: for each B, each f
  std::string config_hash;
};

SweepResult run_sweep(const ExperimentConfig& cfg, const CalibrationResult& cal);

struct SensitivityStep {
  double from = 0.0;
  double to = 0.0;
  double speed_from = 0.0;
  double speed_to = 0.0;
  double change_mm_s = 0.0;
  double change_pct = 0.0;
};

// Group 1 varies f at B = 5 mT; group 2 varies B at f = 7 Hz.
struct SensitivityReport {
  std::vector<SensitivityStep> frequency_steps;
  std::vector<SensitivityStep> field_steps;
  std::string config_hash;
};

SensitivityReport sensitivity_compare(const ExperimentConfig& cfg, const CalibrationResult& cal);

struct ExperimentResult {
  TrajectoryPlan plan;
  TrajectoryRecord record;
  DeviationMetrics metrics;
  std::vector<TurnAnalysis> turns;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, const CalibrationResult& cal,
                                const std::string& plan_name,
                                const std::optional<std::string>& out_dir = std::nullopt);

// Same, for a plan already in hand (e.g. loaded from a plan config file).
ExperimentResult run_experiment_plan(const ExperimentConfig& cfg, const CalibrationResult& cal,
                                     const TrajectoryPlan& plan,
                                     const std::optional<std::string>& out_dir = std::nullopt);

// Builds the plan described by the plan.* keys of a config, with the target
// polyline laid out at the calibrated steady speed.
TrajectoryPlan plan_from_config(const ExperimentConfig& plan_cfg, const ExperimentConfig& cfg,
                                const CalibrationResult& cal, const std::string& name);

// Emission helpers (deterministic byte-for-byte given identical inputs).
std::string trajectory_csv(const TrajectoryRecord& rec, const std::string& config_hash);
std::string sweep_csv(const SweepResult& sweep);
std::string field_scan_csv(const TriaxialCoil& coil, const std::array<double, 3>& currents_A,
                           double half_extent_mm, double step_mm, const std::string& config_hash);
std::string metrics_json(const ExperimentResult& result, const std::string& config_hash);
std::string sensitivity_json(const SensitivityReport& report);
std::string trajectory_svg(const ExperimentResult& result, const std::string& config_hash);
std::string calibration_json(const CalibrationResult& cal, const std::string& config_hash);
CalibrationResult parse_calibration_json(const std::string& text, const ExperimentConfig& cfg);

void write_file(const std::string& path, const std::string& contents);

}  // namespace raysim
