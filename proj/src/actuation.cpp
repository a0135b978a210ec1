#include "raysim/actuation.hpp"

#include <cmath>

#include "raysim/errors.hpp"

namespace raysim {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}
}  // namespace

void MagnetizedFin::validate() const {
  require(volume_m3 > 0, "fin volume must be positive");
  require(remanent_magnetization_A_per_m >= 0, "remanent magnetization must be non-negative");
  require(std::abs(magnetization_dir.norm() - 1.0) <= 1e-12,
          "magnetization direction must be a unit vector");
}

void FinOscillator::validate() const {
  require(inertia_kgm2 > 0 && damping_Nms > 0 && stiffness_Nm > 0,
          "oscillator parameters must be positive");
  require(max_deflection_rad > 0 && max_deflection_rad < kPi / 2,
          "deflection clamp must lie in (0, pi/2)");
}

double FinOscillator::natural_frequency_hz() const {
  return std::sqrt(stiffness_Nm / inertia_kgm2) / (2.0 * kPi);
}

double FinOscillator::damping_ratio() const {
  return damping_Nms / (2.0 * std::sqrt(stiffness_Nm * inertia_kgm2));
}

Vec3 magnetic_torque_Nm(const Vec3& magnetization_A_per_m, const Vec3& field_T, double volume_m3) {
  return volume_m3 * magnetization_A_per_m.cross(field_T);
}

Vec3 magnetic_force_N(const Vec3& magnetization_A_per_m, const Mat3& field_gradient_T_per_m,
                      double volume_m3) {
  return volume_m3 * field_gradient_T_per_m.apply(magnetization_A_per_m);
}

double steady_bending_amplitude_rad(const MagnetizedFin& fin, const FinOscillator& osc,
                                    double b_z_mT, double frequency_hz) {
  fin.validate();
  osc.validate();
  require(frequency_hz > 0, "driving frequency must be positive");
  require(b_z_mT >= 0, "field amplitude must be non-negative");

  const double tau0 = fin.volume_m3 * fin.remanent_magnetization_A_per_m * b_z_mT * 1e-3;
  const double w = 2.0 * kPi * frequency_hz;
  const double elastic = osc.stiffness_Nm - osc.inertia_kgm2 * w * w;
  const double amp = tau0 / std::sqrt(elastic * elastic + osc.damping_Nms * osc.damping_Nms * w * w);
  return std::min(amp, osc.max_deflection_rad);
}

FinState step_fin(const FinOscillator& osc, const FinState& state,
                  const std::function<double(double)>& torque_Nm, double t_s, double dt_s) {
  require(dt_s > 0, "time step must be positive");

  auto accel = [&](double th, double rate, double t) {
    return (torque_Nm(t) - osc.damping_Nms * rate - osc.stiffness_Nm * th) / osc.inertia_kgm2;
  };

  const double th = state.angle_rad, om = state.rate_rad_s;
  const double k1t = om;
  const double k1o = accel(th, om, t_s);
  const double k2t = om + 0.5 * dt_s * k1o;
  const double k2o = accel(th + 0.5 * dt_s * k1t, om + 0.5 * dt_s * k1o, t_s + 0.5 * dt_s);
  const double k3t = om + 0.5 * dt_s * k2o;
  const double k3o = accel(th + 0.5 * dt_s * k2t, om + 0.5 * dt_s * k2o, t_s + 0.5 * dt_s);
  const double k4t = om + dt_s * k3o;
  const double k4o = accel(th + dt_s * k3t, om + dt_s * k3o, t_s + dt_s);

  return {th + dt_s / 6.0 * (k1t + 2 * k2t + 2 * k3t + k4t),
          om + dt_s / 6.0 * (k1o + 2 * k2o + 2 * k3o + k4o)};
}

bool fin_dt_stable(double dt_s, double frequency_hz) {
  if (frequency_hz <= 0) return true;
  return dt_s < 1.0 / (20.0 * frequency_hz);
}

}  // namespace raysim
