#pragma once

#include "raysim/actuation.hpp"
#include "raysim/vec.hpp"

namespace raysim {

// Planar pose plus the velocity vector (needed for the inertia-error drift).
struct BodyState {
  double x_mm = 0.0;
  double y_mm = 0.0;
  double heading_rad = 0.0;
  double heading_rate_rad_s = 0.0;
  double vx_mm_s = 0.0;
  double vy_mm_s = 0.0;

  double speed_mm_s() const;
  void validate() const;
};

// Phenomenological closure: quadratic-drag thrust balance plus an
// underdamped heading servo whose authority scales with the field strength.
struct HydroParams {
  double mass_eff_kg = 2.0e-7;
  double thrust_coeff = 4.4389e-9;  // N s^2 / rad^2
  double drag_coeff = 2.0e-9;       // N s^2 / mm^2
  double heading_omega_rad_s = 7.5;
  double heading_zeta = 0.08;
  double field_gain_per_mT = 0.25;

  void validate() const;
};

// T = C_t * beta^2 * f^2
double thrust_N(double beta_amplitude_rad, double frequency_hz, const HydroParams& p);

// Drag-balance speed v* = sqrt(T / C_d).
double steady_speed_mm_s(double b_mT, double frequency_hz, const MagnetizedFin& fin,
                         const FinOscillator& osc, const HydroParams& p);

// One fixed RK4 step: heading servo toward the commanded yaw (aligning torque
// proportional to the sine of the heading error, authority ~ g_B * B) and the
// velocity vector relaxing toward v* along the heading.
BodyState step_body(const BodyState& state, double commanded_yaw_rad, double b_mT,
                    double frequency_hz, double dt_s, const MagnetizedFin& fin,
                    const FinOscillator& osc, const HydroParams& p);

}  // namespace raysim
