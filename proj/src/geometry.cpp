#include "raysim/geometry.hpp"

#include <cctype>
#include <cmath>

#include "raysim/errors.hpp"

namespace raysim {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}

struct Naca4 {
  double camber;      // max camber / chord
  double camber_pos;  // position of max camber / chord
  double thickness;   // max thickness / chord
};

Naca4 parse_code(const std::string& code) {
  require(code.size() == 4, "NACA code must be 4 digits");
  for (char c : code) require(std::isdigit(static_cast<unsigned char>(c)) != 0, "NACA code must be 4 digits");
  Naca4 p;
  p.camber = (code[0] - '0') / 100.0;
  p.camber_pos = (code[1] - '0') / 10.0;
  p.thickness = ((code[2] - '0') * 10 + (code[3] - '0')) / 100.0;
  return p;
}

}  // namespace

void RobotGeometry::validate() const {
  require(body_length_mm > 0 && body_width_mm > 0 && body_height_mm > 0 && overall_width_mm > 0,
          "geometry dimensions must be positive");
  for (const FinDims* f : {&front_fin, &rear_fin})
    require(f->width_mm > 0 && f->length_mm > 0 && f->thickness_mm > 0,
            "fin dimensions must be positive");
  require(overall_width_mm >= body_width_mm, "overall width must cover the body");
}

std::vector<ProfilePoint> naca4_thickness_profile(const std::string& code, double chord_mm,
                                                  int n_points) {
  const Naca4 p = parse_code(code);
  require(chord_mm > 0, "chord must be positive");
  require(n_points >= 2, "need at least two profile points");

  std::vector<ProfilePoint> out(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double xr = static_cast<double>(i) / (n_points - 1);
    const double yt = (p.thickness / 0.2) *
                      (0.2969 * std::sqrt(xr) - 0.1260 * xr - 0.3516 * xr * xr +
                       0.2843 * xr * xr * xr - 0.1015 * xr * xr * xr * xr);
    out[static_cast<size_t>(i)] = {xr * chord_mm, yt * chord_mm};
  }
  return out;
}

double naca4_camber_mm(const std::string& code, double chord_mm, double x_mm) {
  const Naca4 c = parse_code(code);
  require(chord_mm > 0, "chord must be positive");
  require(x_mm >= 0 && x_mm <= chord_mm, "station outside chord");
  if (c.camber == 0.0 || c.camber_pos == 0.0) return 0.0;
  const double xr = x_mm / chord_mm;
  const double m = c.camber;
  const double pp = c.camber_pos;
  double yc;
  if (xr <= pp)
    yc = m / (pp * pp) * (2 * pp * xr - xr * xr);
  else
    yc = m / ((1 - pp) * (1 - pp)) * ((1 - 2 * pp) + 2 * pp * xr - xr * xr);
  return yc * chord_mm;
}

double magnetized_volume_m3(const RobotGeometry& g) {
  g.validate();
  const double fin_mm3 = g.front_fin.width_mm * g.front_fin.length_mm * g.front_fin.thickness_mm;
  return 2.0 * fin_mm3 * 1e-9;
}

}  // namespace raysim
