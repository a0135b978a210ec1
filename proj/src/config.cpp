#include "raysim/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "raysim/errors.hpp"

namespace raysim {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw input_error("trailing characters in value for " + key);
    return v;
  } catch (const std::invalid_argument&) {
    throw input_error("malformed number '" + s + "' for key " + key);
  } catch (const std::out_of_range&) {
    throw input_error("number out of range for key " + key);
  }
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  const RobotGeometry g;
  scalars_ = {
      {"geometry.body_length_mm", g.body_length_mm},
      {"geometry.body_width_mm", g.body_width_mm},
      {"geometry.body_height_mm", g.body_height_mm},
      {"geometry.overall_width_mm", g.overall_width_mm},
      {"geometry.front_fin.width_mm", g.front_fin.width_mm},
      {"geometry.front_fin.length_mm", g.front_fin.length_mm},
      {"geometry.front_fin.thickness_mm", g.front_fin.thickness_mm},
      {"geometry.rear_fin.width_mm", g.rear_fin.width_mm},
      {"geometry.rear_fin.length_mm", g.rear_fin.length_mm},
      {"geometry.rear_fin.thickness_mm", g.rear_fin.thickness_mm},
      {"coil.x.turns", 900},
      {"coil.x.resistance_ohm", 14.38},
      {"coil.x.effective_radius_mm", 190},
      {"coil.x.inner_diameter_mm", 324},
      {"coil.x.outer_diameter_mm", 418},
      {"coil.y.turns", 648},
      {"coil.y.resistance_ohm", 7.83},
      {"coil.y.effective_radius_mm", 140},
      {"coil.y.inner_diameter_mm", 230},
      {"coil.y.outer_diameter_mm", 310},
      {"coil.z.turns", 480},
      {"coil.z.resistance_ohm", 4.23},
      {"coil.z.effective_radius_mm", 100},
      {"coil.z.inner_diameter_mm", 140},
      {"coil.z.outer_diameter_mm", 224},
      {"fin.remanence_a_per_m", 6.0e4},
      {"osc.inertia_kgm2", 3.0743e-10},
      {"osc.damping_nms", 3.1544e-8},
      {"osc.stiffness_nm", 1.6051e-6},
      {"osc.beta_max_rad", 0.6},
      {"hydro.mass_eff_kg", 2.0e-7},
      {"hydro.thrust_coeff", 4.4389e-9},
      {"hydro.drag_coeff", 2.0e-9},
      {"hydro.heading_omega_rad_s", 7.5},
      {"hydro.heading_zeta", 0.08},
      {"hydro.field_gain_per_mt", 0.25},
      {"plan.leg_mm", 20.0},
      {"plan.mode", 0},  // 0 = distance-based, 1 = time-based
      {"plan.b_xy_mt", 4.0},
      {"plan.b_z_mt", 4.0},
      {"plan.f_hz", 11.0},
      {"sim.dt_s", 1e-3},
      {"sim.grid_step_mm", 2.0},
      {"seed", 0},
  };
  lists_ = {
      {"drive.b_list_mt", {1.5, 2.25, 3.0, 4.0, 5.0}},
      {"drive.f_list_hz", {1, 3, 5, 7, 11, 13, 15}},
      {"plan.amounts", {20.0, 20.0, 20.0}},
      {"plan.yaws_deg", {0.0, -45.0, 0.0}},
  };
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (cfg.lists_.count(key)) {
      std::vector<double> out;
      std::istringstream vs(value);
      std::string item;
      while (std::getline(vs, item, ',')) out.push_back(parse_number(trim(item), key));
      if (out.empty()) throw input_error("empty list for key " + key);
      cfg.lists_[key] = out;
    } else if (cfg.scalars_.count(key)) {
      cfg.scalars_[key] = parse_number(value, key);
    } else {
      throw input_error("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [key, value] : scalars_) out << key << " = " << format_number(value) << "\n";
  for (const auto& [key, values] : lists_) {
    out << key << " = ";
    for (size_t i = 0; i < values.size(); ++i)
      out << (i ? "," : "") << format_number(values[i]);
    out << "\n";
  }
  return out.str();
}

std::string ExperimentConfig::hash() const {
  const std::string text = serialize();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double ExperimentConfig::get(const std::string& key) const {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) throw input_error("unknown config key '" + key + "'");
  return it->second;
}

void ExperimentConfig::set(const std::string& key, double value) {
  const auto it = scalars_.find(key);
  if (it == scalars_.end()) throw input_error("unknown config key '" + key + "'");
  it->second = value;
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  const auto it = lists_.find(key);
  if (it == lists_.end()) throw input_error("unknown config list key '" + key + "'");
  return it->second;
}

void ExperimentConfig::set_list(const std::string& key, const std::vector<double>& values) {
  const auto it = lists_.find(key);
  if (it == lists_.end()) throw input_error("unknown config list key '" + key + "'");
  if (values.empty()) throw input_error("empty list for key " + key);
  it->second = values;
}

RobotGeometry ExperimentConfig::geometry() const {
  RobotGeometry g;
  g.body_length_mm = get("geometry.body_length_mm");
  g.body_width_mm = get("geometry.body_width_mm");
  g.body_height_mm = get("geometry.body_height_mm");
  g.overall_width_mm = get("geometry.overall_width_mm");
  g.front_fin = {get("geometry.front_fin.width_mm"), get("geometry.front_fin.length_mm"),
                 get("geometry.front_fin.thickness_mm")};
  g.rear_fin = {get("geometry.rear_fin.width_mm"), get("geometry.rear_fin.length_mm"),
                get("geometry.rear_fin.thickness_mm")};
  g.validate();
  return g;
}

TriaxialCoil ExperimentConfig::coil() const {
  TriaxialCoil c = TriaxialCoil::standard();
  auto fill = [this](CoilAxis& axis, const std::string& prefix) {
    axis.turns = static_cast<int>(get(prefix + ".turns"));
    axis.resistance_ohm = get(prefix + ".resistance_ohm");
    axis.effective_radius_mm = get(prefix + ".effective_radius_mm");
    axis.inner_diameter_mm = get(prefix + ".inner_diameter_mm");
    axis.outer_diameter_mm = get(prefix + ".outer_diameter_mm");
  };
  fill(c.x, "coil.x");
  fill(c.y, "coil.y");
  fill(c.z, "coil.z");
  c.validate();
  return c;
}

MagnetizedFin ExperimentConfig::fin() const {
  MagnetizedFin f;
  f.volume_m3 = magnetized_volume_m3(geometry());
  f.remanent_magnetization_A_per_m = get("fin.remanence_a_per_m");
  f.validate();
  return f;
}

FinOscillator ExperimentConfig::oscillator() const {
  FinOscillator o;
  o.inertia_kgm2 = get("osc.inertia_kgm2");
  o.damping_Nms = get("osc.damping_nms");
  o.stiffness_Nm = get("osc.stiffness_nm");
  o.max_deflection_rad = get("osc.beta_max_rad");
  o.validate();
  return o;
}

HydroParams ExperimentConfig::hydro() const {
  HydroParams h;
  h.mass_eff_kg = get("hydro.mass_eff_kg");
  h.thrust_coeff = get("hydro.thrust_coeff");
  h.drag_coeff = get("hydro.drag_coeff");
  h.heading_omega_rad_s = get("hydro.heading_omega_rad_s");
  h.heading_zeta = get("hydro.heading_zeta");
  h.field_gain_per_mT = get("hydro.field_gain_per_mt");
  h.validate();
  return h;
}

}  // namespace raysim
