#pragma once

#include <array>

#include "raysim/vec.hpp"

namespace raysim {

inline constexpr double kMu0 = 4.0 * 3.14159265358979323846 * 1e-7;  // H/m
inline constexpr int kDefaultLoopSegments = 720;
inline constexpr double kWireRadiusM = 0.6e-3;  // 1.2 mm copper wire

// One Helmholtz pair. `axis` is the pair's symmetry direction (unit vector).
struct CoilAxis {
  Vec3 axis{1, 0, 0};
  int turns = 0;
  double resistance_ohm = 0.0;
  double effective_radius_mm = 0.0;
  double inner_diameter_mm = 0.0;
  double outer_diameter_mm = 0.0;

  void validate() const;
};

struct TriaxialCoil {
  CoilAxis x;
  CoilAxis y;
  CoilAxis z;

  static TriaxialCoil standard();  // fabricated drive system parameters
  void validate() const;
};

// Oscillating harmonic drive: static in-plane field B_xy at yaw gamma plus a
// sinusoidal vertical component of amplitude B_z and frequency f.
struct DriveSignal {
  double b_xy_mT = 4.0;
  double yaw_deg = 0.0;
  double b_z_mT = 4.0;
  double frequency_hz = 11.0;
  double phase_rad = 0.0;

  void validate() const;
  // Peak elevation of the instantaneous field above the horizontal plane.
  double pitch_deg() const;
};

// Flux density of an N-turn circular filament loop carrying `current`,
// centred at `center` with unit normal `axis`, radius in metres. Midpoint-rule
// Biot-Savart over `segments` straight elements; O(1/N^2) convergent.
Vec3 loop_field_T(double loop_radius_m, double current_A, int turns, const Vec3& point_m,
                  const Vec3& center_m = {}, const Vec3& axis = {0, 0, 1},
                  int segments = kDefaultLoopSegments);

// Two coaxial loops of the pair separated by the effective radius
// (Helmholtz spacing), both centred on the origin.
Vec3 pair_field_T(const CoilAxis& coil, double current_A, const Vec3& point_m,
                  int segments = kDefaultLoopSegments);

// Superposition of the three pairs.
Vec3 triaxial_field_T(const TriaxialCoil& coil, const std::array<double, 3>& currents_A,
                      const Vec3& point_m, int segments = kDefaultLoopSegments);

// Current that produces |B| = b_target_mT at the origin of the given pair.
double current_for_field_A(const CoilAxis& coil, double b_target_mT,
                           int segments = kDefaultLoopSegments);

// Drive field at time t, in millitesla.
Vec3 oscillating_field_mT(const DriveSignal& s, double t_s);

struct HomogeneityBox {
  double dx_mm = 0.0;
  double dy_mm = 0.0;
  double dz_mm = 0.0;
};

// Largest origin-centred axis-aligned box (greedy round-robin growth in grid
// steps) such that every grid point inside satisfies
// |B(p) - B(0)|/|B(0)| <= tolerance for each single-axis drive configuration.
HomogeneityBox homogeneity_volume(const TriaxialCoil& coil, const std::array<double, 3>& currents_A,
                                  double tolerance, double grid_step_mm,
                                  int segments = kDefaultLoopSegments);

}  // namespace raysim
