#include "raysim/field.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "raysim/errors.hpp"

namespace raysim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}

// Orthonormal in-plane frame for a loop with normal n.
void loop_frame(const Vec3& n, Vec3& u, Vec3& v) {
  const Vec3 seed = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  u = n.cross(seed).normalized();
  v = n.cross(u);
}

// Midpoint angles of the loop discretisation, cached per segment count.
const std::vector<std::pair<double, double>>& segment_table(int segments) {
  thread_local int cached_count = 0;
  thread_local std::vector<std::pair<double, double>> table;
  if (cached_count != segments) {
    table.resize(static_cast<size_t>(segments));
    const double dtheta = 2.0 * kPi / segments;
    for (int i = 0; i < segments; ++i) {
      const double th = (i + 0.5) * dtheta;
      table[static_cast<size_t>(i)] = {std::cos(th), std::sin(th)};
    }
    cached_count = segments;
  }
  return table;
}

}  // namespace

void CoilAxis::validate() const {
  require(turns > 0, "coil turns must be positive");
  require(effective_radius_mm > 0, "coil radius must be positive");
  require(resistance_ohm > 0, "coil resistance must be positive");
  require(inner_diameter_mm < outer_diameter_mm, "inner diameter must be below outer");
  require(std::abs(axis.norm() - 1.0) < 1e-9, "coil axis must be a unit vector");
}

TriaxialCoil TriaxialCoil::standard() {
  TriaxialCoil c;
  c.x = {{1, 0, 0}, 900, 14.38, 190.0, 324.0, 418.0};
  c.y = {{0, 1, 0}, 648, 7.83, 140.0, 230.0, 310.0};
  c.z = {{0, 0, 1}, 480, 4.23, 100.0, 140.0, 224.0};
  return c;
}

void TriaxialCoil::validate() const {
  x.validate();
  y.validate();
  z.validate();
  require(std::abs(x.axis.dot(y.axis)) < 1e-9 && std::abs(y.axis.dot(z.axis)) < 1e-9 &&
              std::abs(z.axis.dot(x.axis)) < 1e-9,
          "coil axes must be pairwise orthogonal");
  require(x.outer_diameter_mm >= y.outer_diameter_mm && y.outer_diameter_mm >= z.outer_diameter_mm,
          "coil nesting order violated");
}

void DriveSignal::validate() const {
  require(b_xy_mT >= 0 && b_z_mT >= 0, "field magnitudes must be non-negative");
  require(frequency_hz >= 0, "frequency must be non-negative");
}

double DriveSignal::pitch_deg() const {
  if (b_xy_mT <= 0.0) return 90.0;
  return rad_to_deg(std::atan2(b_z_mT, b_xy_mT));
}

Vec3 loop_field_T(double loop_radius_m, double current_A, int turns, const Vec3& point_m,
                  const Vec3& center_m, const Vec3& axis, int segments) {
  require(loop_radius_m > 0, "loop radius must be positive");
  require(segments >= 8, "too few Biot-Savart segments");

  const Vec3 n = axis.normalized();
  const Vec3 rel = point_m - center_m;
  const double along = rel.dot(n);
  const Vec3 radial = rel - along * n;
  const double rho = radial.norm();
  const double wire_dist =
      std::sqrt((rho - loop_radius_m) * (rho - loop_radius_m) + along * along);
  if (wire_dist < kWireRadiusM)
    throw singularity_error("field point within one wire radius of the loop");

  Vec3 u, v;
  loop_frame(n, u, v);

  const double dtheta = 2.0 * kPi / segments;
  const double pref = kMu0 * turns * current_A / (4.0 * kPi) * loop_radius_m * dtheta;
  Vec3 b{};
  for (const auto& [c, s] : segment_table(segments)) {
    const Vec3 pos = center_m + loop_radius_m * (c * u + s * v);
    const Vec3 tangent = -s * u + c * v;  // unit; arc factor folded into pref
    const Vec3 r = point_m - pos;
    const double rn = r.norm();
    b += tangent.cross(r) * (pref / (rn * rn * rn));
  }
  return b;
}

Vec3 pair_field_T(const CoilAxis& coil, double current_A, const Vec3& point_m, int segments) {
  coil.validate();
  const double r_m = coil.effective_radius_mm * 1e-3;
  const Vec3 offset = coil.axis * (0.5 * r_m);
  return loop_field_T(r_m, current_A, coil.turns, point_m, offset, coil.axis, segments) +
         loop_field_T(r_m, current_A, coil.turns, point_m, -offset, coil.axis, segments);
}

Vec3 triaxial_field_T(const TriaxialCoil& coil, const std::array<double, 3>& currents_A,
                      const Vec3& point_m, int segments) {
  return pair_field_T(coil.x, currents_A[0], point_m, segments) +
         pair_field_T(coil.y, currents_A[1], point_m, segments) +
         pair_field_T(coil.z, currents_A[2], point_m, segments);
}

double current_for_field_A(const CoilAxis& coil, double b_target_mT, int segments) {
  require(std::isfinite(b_target_mT), "target field must be finite");
  if (b_target_mT == 0.0) return 0.0;
  const double b_per_amp_T = pair_field_T(coil, 1.0, Vec3{}, segments).norm();
  return b_target_mT * 1e-3 / b_per_amp_T;
}

Vec3 oscillating_field_mT(const DriveSignal& s, double t_s) {
  s.validate();
  const double g = deg_to_rad(s.yaw_deg);
  const double bz = s.b_z_mT * std::sin(2.0 * kPi * s.frequency_hz * t_s + s.phase_rad);
  return {s.b_xy_mT * std::cos(g), s.b_xy_mT * std::sin(g), bz};
}

HomogeneityBox homogeneity_volume(const TriaxialCoil& coil, const std::array<double, 3>& currents_A,
                                  double tolerance, double grid_step_mm, int segments) {
  coil.validate();
  require(tolerance > 0 && tolerance < 1, "tolerance must lie in (0, 1)");
  require(grid_step_mm > 0, "grid step must be positive");

  struct Config {
    const CoilAxis* coil;
    double current;
    Vec3 b0;
    double b0_norm;
  };
  std::vector<Config> configs;
  const std::array<std::pair<const CoilAxis*, double>, 3> axes{
      {{&coil.x, currents_A[0]}, {&coil.y, currents_A[1]}, {&coil.z, currents_A[2]}}};
  for (const auto& [axis_coil, current] : axes) {
    Config c{axis_coil, current, {}, 0.0};
    c.b0 = pair_field_T(*axis_coil, current, Vec3{}, segments);
    c.b0_norm = c.b0.norm();
    require(c.b0_norm > 0, "homogeneity scan needs a non-zero current on every axis");
    configs.push_back(c);
  }

  const double step_m = grid_step_mm * 1e-3;
  // Scan stays well inside the innermost coil; by then the deviation bound
  // has long failed for the tolerances of interest.
  const double r_min_m = std::min({coil.x.effective_radius_mm, coil.y.effective_radius_mm,
                                   coil.z.effective_radius_mm}) *
                         1e-3;
  const int cap = static_cast<int>(std::floor(0.45 * r_min_m / step_m));

  auto point_ok = [&](int i, int j, int k) {
    const Vec3 p{i * step_m, j * step_m, k * step_m};
    for (const Config& c : configs) {
      const Vec3 b = pair_field_T(*c.coil, c.current, p, segments);
      if ((b - c.b0).norm() / c.b0_norm > tolerance) return false;
    }
    return true;
  };

  // Slab of new grid points when half-extent of dimension `dim` becomes n[dim].
  auto slab_ok = [&](const std::array<int, 3>& n, int dim) {
    std::array<int, 3> lo{-n[0], -n[1], -n[2]};
    std::array<int, 3> hi{n[0], n[1], n[2]};
    for (int sign : {hi[dim], lo[dim]}) {
      std::array<int, 3> a = lo, b = hi;
      a[dim] = b[dim] = sign;
      for (int i = a[0]; i <= b[0]; ++i)
        for (int j = a[1]; j <= b[1]; ++j)
          for (int k = a[2]; k <= b[2]; ++k)
            if (!point_ok(i, j, k)) return false;
    }
    return true;
  };

  std::array<int, 3> n{0, 0, 0};
  if (!point_ok(0, 0, 0)) return {};
  bool grew = true;
  while (grew) {
    grew = false;
    for (int dim = 0; dim < 3; ++dim) {
      if (n[dim] >= cap) continue;
      std::array<int, 3> trial = n;
      trial[dim] += 1;
      if (slab_ok(trial, dim)) {
        n = trial;
        grew = true;
      }
    }
  }
  return {2.0 * n[0] * grid_step_mm, 2.0 * n[1] * grid_step_mm, 2.0 * n[2] * grid_step_mm};
}

}  // namespace raysim
