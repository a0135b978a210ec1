#include "raysim/locomotion.hpp"

#include <cmath>

#include "raysim/errors.hpp"

namespace raysim {

namespace {
void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}
}  // namespace

double BodyState::speed_mm_s() const { return std::hypot(vx_mm_s, vy_mm_s); }

void BodyState::validate() const {
  require(std::isfinite(x_mm) && std::isfinite(y_mm) && std::isfinite(heading_rad) &&
              std::isfinite(heading_rate_rad_s) && std::isfinite(vx_mm_s) && std::isfinite(vy_mm_s),
          "body state must be finite");
}

void HydroParams::validate() const {
  require(mass_eff_kg > 0 && thrust_coeff > 0 && drag_coeff > 0 && heading_omega_rad_s > 0 &&
              field_gain_per_mT > 0,
          "hydro parameters must be positive");
  require(heading_zeta > 0 && heading_zeta < 1, "heading damping ratio must lie in (0, 1)");
}

double thrust_N(double beta_amplitude_rad, double frequency_hz, const HydroParams& p) {
  require(beta_amplitude_rad >= 0 && frequency_hz >= 0, "thrust inputs must be non-negative");
  return p.thrust_coeff * beta_amplitude_rad * beta_amplitude_rad * frequency_hz * frequency_hz;
}

double steady_speed_mm_s(double b_mT, double frequency_hz, const MagnetizedFin& fin,
                         const FinOscillator& osc, const HydroParams& p) {
  p.validate();
  if (b_mT <= 0.0 || frequency_hz <= 0.0) return 0.0;
  const double beta = steady_bending_amplitude_rad(fin, osc, b_mT, frequency_hz);
  return std::sqrt(thrust_N(beta, frequency_hz, p) / p.drag_coeff);
}

BodyState step_body(const BodyState& state, double commanded_yaw_rad, double b_mT,
                    double frequency_hz, double dt_s, const MagnetizedFin& fin,
                    const FinOscillator& osc, const HydroParams& p) {
  require(dt_s > 0, "time step must be positive");
  state.validate();
  p.validate();

  const double beta = b_mT > 0 && frequency_hz > 0
                          ? steady_bending_amplitude_rad(fin, osc, b_mT, frequency_hz)
                          : 0.0;
  const double t_n = thrust_N(beta, frequency_hz, p);
  const double we = std::sqrt(p.field_gain_per_mT * b_mT) * p.heading_omega_rad_s;
  const double inv_mass = 1e3 / p.mass_eff_kg;  // N -> mm/s^2

  struct Deriv {
    double dx, dy, dpsi, dpsidot, dvx, dvy;
  };
  auto deriv = [&](const BodyState& s) -> Deriv {
    const double err = wrap_angle(commanded_yaw_rad - s.heading_rad);
    const double psidd =
        we * we * std::sin(err) - 2.0 * p.heading_zeta * we * s.heading_rate_rad_s;
    const double vmag = s.speed_mm_s();
    const double ax =
        (t_n * std::cos(s.heading_rad) - p.drag_coeff * vmag * s.vx_mm_s) * inv_mass;
    const double ay =
        (t_n * std::sin(s.heading_rad) - p.drag_coeff * vmag * s.vy_mm_s) * inv_mass;
    return {s.vx_mm_s, s.vy_mm_s, s.heading_rate_rad_s, psidd, ax, ay};
  };
  auto advance = [](const BodyState& s, const Deriv& d, double h) -> BodyState {
    BodyState r = s;
    r.x_mm += h * d.dx;
    r.y_mm += h * d.dy;
    r.heading_rad += h * d.dpsi;
    r.heading_rate_rad_s += h * d.dpsidot;
    r.vx_mm_s += h * d.dvx;
    r.vy_mm_s += h * d.dvy;
    return r;
  };

  const Deriv k1 = deriv(state);
  const Deriv k2 = deriv(advance(state, k1, 0.5 * dt_s));
  const Deriv k3 = deriv(advance(state, k2, 0.5 * dt_s));
  const Deriv k4 = deriv(advance(state, k3, dt_s));

  BodyState out = state;
  out.x_mm += dt_s / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
  out.y_mm += dt_s / 6.0 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy);
  out.heading_rad += dt_s / 6.0 * (k1.dpsi + 2 * k2.dpsi + 2 * k3.dpsi + k4.dpsi);
  out.heading_rate_rad_s +=
      dt_s / 6.0 * (k1.dpsidot + 2 * k2.dpsidot + 2 * k3.dpsidot + k4.dpsidot);
  out.vx_mm_s += dt_s / 6.0 * (k1.dvx + 2 * k2.dvx + 2 * k3.dvx + k4.dvx);
  out.vy_mm_s += dt_s / 6.0 * (k1.dvy + 2 * k2.dvy + 2 * k3.dvy + k4.dvy);
  out.heading_rad = wrap_angle(out.heading_rad);
  return out;
}

}  // namespace raysim
