#pragma once

#include <cstddef>
#include <vector>

namespace raysim {

// Fin surface displacement parameters: a spanwise rigid swing about the root
// line plus a chordwise-decaying traveling wave, with front/rear phase delay.
struct FinWaveParams {
  double swing_amplitude_rad = 0.3;
  double oscillation_amplitude_mm = 1.0;
  double chordwise_decay_per_mm = 0.1;
  double chordwise_wavenumber_per_mm = 0.3;
  double phase_delay_rad = 0.7853981633974483;  // front-to-rear lag
  double angular_frequency_rad_s = 69.11503837897544;  // 2*pi*11 Hz
  double span_mm = 9.72;
  double chord_mm = 9.66;

  void validate() const;
};

// Displacement z(x, y, t): x chordwise from the leading edge, y spanwise from
// the body root, both in millimetres and inside the fin planform.
double fin_surface_mm(double x_mm, double y_mm, double t_s, const FinWaveParams& p);

// Distance covered per flapping cycle.
double advance_per_cycle_mm(double speed_mm_s, double frequency_hz);

// Phase lag of `rear` behind `front` via circular cross-correlation.
// Traces must sample an integer number of periods; samples_per_period = 0
// means the whole trace is one period.
double phase_delay_check_rad(const std::vector<double>& front, const std::vector<double>& rear,
                             std::size_t samples_per_period = 0);

}  // namespace raysim
