#pragma once

#include <functional>

#include "raysim/vec.hpp"

namespace raysim {

struct MagnetizedFin {
  double volume_m3 = 2.3328e-9;              // both front fins
  double remanent_magnetization_A_per_m = 6.0e4;  // calibration parameter
  Vec3 magnetization_dir{1, 0, 0};           // body frame, in-plane

  void validate() const;
};

// Single rotational degree of freedom at the fin root: J th'' + c th' + k th = tau(t).
struct FinOscillator {
  double inertia_kgm2 = 3.0743e-10;
  double damping_Nms = 3.1544e-8;
  double stiffness_Nm = 1.6051e-6;
  double max_deflection_rad = 0.6;

  void validate() const;
  double natural_frequency_hz() const;
  double damping_ratio() const;
};

// tau = V (M x B)
Vec3 magnetic_torque_Nm(const Vec3& magnetization_A_per_m, const Vec3& field_T, double volume_m3);

// F_i = V sum_j M_j dB_i/dx_j ; grad(i, j) = dB_i/dx_j in T/m.
Vec3 magnetic_force_N(const Vec3& magnetization_A_per_m, const Mat3& field_gradient_T_per_m,
                      double volume_m3);

// Steady-state amplitude of the driven fin under a vertical sinusoidal field
// of amplitude b_z_mT, clamped at the oscillator's max deflection.
double steady_bending_amplitude_rad(const MagnetizedFin& fin, const FinOscillator& osc,
                                    double b_z_mT, double frequency_hz);

struct FinState {
  double angle_rad = 0.0;
  double rate_rad_s = 0.0;
};

// One RK4 step of the fin ODE under the given torque history.
FinState step_fin(const FinOscillator& osc, const FinState& state,
                  const std::function<double(double)>& torque_Nm, double t_s, double dt_s);

// Fixed-step integration is trustworthy only when dt resolves the forcing.
bool fin_dt_stable(double dt_s, double frequency_hz);

}  // namespace raysim
