#include "raysim/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "raysim/errors.hpp"

namespace raysim {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}
}  // namespace

void FinWaveParams::validate() const {
  require(swing_amplitude_rad >= 0 && swing_amplitude_rad < kPi / 2, "swing amplitude out of range");
  require(oscillation_amplitude_mm >= 0, "oscillation amplitude must be non-negative");
  require(chordwise_decay_per_mm >= 0, "decay rate must be non-negative");
  require(phase_delay_rad >= 0 && phase_delay_rad <= kPi, "phase delay must lie in [0, pi]");
  require(span_mm > 0 && chord_mm > 0, "planform extents must be positive");
}

double fin_surface_mm(double x_mm, double y_mm, double t_s, const FinWaveParams& p) {
  p.validate();
  require(x_mm >= 0 && x_mm <= p.chord_mm, "chordwise station outside planform");
  require(y_mm >= 0 && y_mm <= p.span_mm, "spanwise station outside planform");

  const double swing = y_mm * std::tan(p.swing_amplitude_rad * std::sin(p.angular_frequency_rad_s * t_s));
  const double wave = p.oscillation_amplitude_mm * (y_mm / p.span_mm) *
                      std::exp(-p.chordwise_decay_per_mm * x_mm) *
                      std::sin(p.chordwise_wavenumber_per_mm * x_mm -
                               p.angular_frequency_rad_s * t_s + p.phase_delay_rad);
  return swing + wave;
}

double advance_per_cycle_mm(double speed_mm_s, double frequency_hz) {
  require(frequency_hz > 0, "frequency must be positive");
  return speed_mm_s / frequency_hz;
}

double phase_delay_check_rad(const std::vector<double>& front, const std::vector<double>& rear,
                             std::size_t samples_per_period) {
  if (front.size() != rear.size() || front.size() < 4)
    throw analysis_error("traces must be equal-length with at least 4 samples");
  const std::size_t n = front.size();
  const std::size_t period = samples_per_period == 0 ? n : samples_per_period;
  if (period < 4 || n % period != 0)
    throw analysis_error("trace length must be a whole number of periods");

  // periodicity check across periods
  const auto [mn, mx] = std::minmax_element(front.begin(), front.end());
  const double span = *mx - *mn;
  if (span <= 0.0) throw analysis_error("degenerate constant trace");
  for (const std::vector<double>* tr : {&front, &rear})
    for (std::size_t i = 0; i + period < tr->size(); ++i)
      if (std::abs((*tr)[i] - (*tr)[i + period]) > 0.02 * span)
        throw analysis_error("traces are not periodic at the declared period");

  // circular cross-correlation over one period: rear[i] ~ front[i - lag], so
  // shifting the rear forward by the lag re-aligns it with the front
  double best = -1e300;
  std::size_t best_lag = 0;
  for (std::size_t lag = 0; lag < period; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i < period; ++i) acc += rear[(i + lag) % period] * front[i];
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  return 2.0 * kPi * static_cast<double>(best_lag) / static_cast<double>(period);
}

}  // namespace raysim
