#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "raysim/actuation.hpp"
#include "raysim/field.hpp"
#include "raysim/geometry.hpp"
#include "raysim/locomotion.hpp"

namespace raysim {

// Flat dotted-key configuration ("coil.z.turns = 480"). Unknown keys are
// rejected.
class ExperimentConfig {
 public:
  ExperimentConfig();  // defaults

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  std::string serialize() const;       // canonical form, fixed key order
  std::string hash() const;            // FNV-1a 64 of the canonical form, hex

  double get(const std::string& key) const;
  void set(const std::string& key, double value);
  std::vector<double> get_list(const std::string& key) const;
  void set_list(const std::string& key, const std::vector<double>& values);

  RobotGeometry geometry() const;
  TriaxialCoil coil() const;
  MagnetizedFin fin() const;
  FinOscillator oscillator() const;
  HydroParams hydro() const;
  std::vector<double> b_grid_mT() const { return get_list("drive.b_list_mt"); }
  std::vector<double> f_grid_hz() const { return get_list("drive.f_list_hz"); }
  double dt_s() const { return get("sim.dt_s"); }
  double grid_step_mm() const { return get("sim.grid_step_mm"); }
  double leg_mm() const { return get("plan.leg_mm"); }

 private:
  std::map<std::string, double> scalars_;
  std::map<std::string, std::vector<double>> lists_;
};

}  // namespace raysim
