#pragma once

#include <string>
#include <vector>

namespace raysim {

struct FinDims {
  double width_mm = 0.0;
  double length_mm = 0.0;
  double thickness_mm = 0.0;
};

// Body and fin dimensions of the milliswimmer. Defaults are the fabricated
// robot's values; all lengths in millimetres.
struct RobotGeometry {
  double body_length_mm = 11.34;
  double body_width_mm = 2.0;
  double body_height_mm = 1.5;
  double overall_width_mm = 20.56;
  FinDims front_fin{9.72, 1.0, 0.12};
  FinDims rear_fin{9.41, 8.66, 0.12};

  void validate() const;  // throws input_error on violated invariants
};

struct ProfilePoint {
  double x_mm = 0.0;
  double half_thickness_mm = 0.0;
};

// Standard NACA 4-digit thickness distribution y_t sampled at n_points
// uniformly spaced chordwise stations from 0 to chord. y_t is the half
// thickness (surface offset from the camber line).
std::vector<ProfilePoint> naca4_thickness_profile(const std::string& code, double chord_mm,
                                                  int n_points);

// Camber line ordinate of the same family at chordwise station x. Zero for
// symmetric codes such as 0018.
double naca4_camber_mm(const std::string& code, double chord_mm, double x_mm);

// Total magnetized volume in cubic metres: both front fins, box approximation.
double magnetized_volume_m3(const RobotGeometry& g);

}  // namespace raysim
