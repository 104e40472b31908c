#include "exo/config.hpp"

#include <filesystem>
#include <fstream>

#include "exo/errors.hpp"
#include "exo/units.hpp"

namespace exo {

namespace {

double require_number(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw IoError("config: missing numeric field '" + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

Json to_json(const FpamSpec& spec) {
  Json j;
  j["l0_m"] = spec.l0_m;
  j["r0_m"] = spec.r0_m;
  j["t_m"] = spec.t_m;
  j["e_pa"] = spec.e_pa;
  j["eps0"] = spec.eps0;
  Json table = Json::array();
  for (const auto& e : spec.eps_max_by_pressure) {
    table.push_back({{"p_pa", e.p_pa}, {"value", e.eps_max}});
  }
  j["eps_max"] = table;
  return j;
}

Json to_json(const IdentifiedSpec& identified) {
  Json j = to_json(identified.spec);
  j["measured_l0_m"] = identified.measured_l0_m;
  j["measured_r0_m"] = identified.measured_r0_m;
  Json radii = Json::array();
  for (const auto& pr : identified.r0_by_pressure) {
    radii.push_back({{"p_pa", pr.p_pa}, {"r0_m", pr.r0_m}});
  }
  j["r0_by_pressure"] = radii;
  return j;
}

Json to_json(const PlacementParams& p) {
  return Json{{"d1_m", p.d1_m},
              {"w1_m", p.w1_m},
              {"d2_m", p.d2_m},
              {"w2_m", p.w2_m},
              {"rw_m", p.rw_m}};
}

Json to_json(const StretchModel& m) {
  return Json{{"k1_n_per_m2", m.k1_n_per_m2}, {"k2_n_per_m2", m.k2_n_per_m2}};
}

FpamSpec fpam_from_json(const Json& j) {
  FpamSpec spec;
  spec.l0_m = require_number(j, "l0_m");
  spec.r0_m = require_number(j, "r0_m");
  spec.t_m = require_number(j, "t_m");
  spec.e_pa = require_number(j, "e_pa");
  spec.eps0 = require_number(j, "eps0");
  if (!j.contains("eps_max") || !j["eps_max"].is_array()) {
    throw IoError("config: fpam spec needs an 'eps_max' array");
  }
  for (const auto& entry : j["eps_max"]) {
    spec.eps_max_by_pressure.push_back(
        {require_number(entry, "p_pa"), require_number(entry, "value")});
  }
  spec.validate();
  return spec;
}

PlacementParams placement_from_json(const Json& j) {
  PlacementParams p;
  p.d1_m = require_number(j, "d1_m");
  p.w1_m = require_number(j, "w1_m");
  p.d2_m = require_number(j, "d2_m");
  p.w2_m = require_number(j, "w2_m");
  p.rw_m = require_number(j, "rw_m");
  p.validate();
  return p;
}

StretchModel stretch_from_json(const Json& j) {
  StretchModel m{require_number(j, "k1_n_per_m2"),
                 require_number(j, "k2_n_per_m2")};
  m.validate();
  return m;
}

ControllerConfig controller_from_json(const Json& j) {
  ControllerConfig c;
  c.gain_kpa_per_deg = require_number(j, "gain_kpa_per_deg");
  c.dt_s = require_number(j, "dt_s");
  c.p_init_kpa = require_number(j, "p_init_kpa");
  c.p_threshold_kpa = require_number(j, "p_threshold_kpa");
  c.p_min_kpa = require_number(j, "p_min_kpa");
  c.p_max_kpa = require_number(j, "p_max_kpa");
  if (j.contains("regulator_lag_s")) {
    c.regulator_lag_s = require_number(j, "regulator_lag_s");
  }
  if (j.contains("settle_window_s")) {
    c.settle_window_s = require_number(j, "settle_window_s");
  }
  c.validate();
  return c;
}

PlantConfig plant_from_json(const Json& j) {
  PlantConfig p;
  p.inertia_kg_m2 = require_number(j, "inertia_kg_m2");
  p.damping_nms_per_rad = require_number(j, "damping_nms_per_rad");
  p.stiffness_nm_per_rad = require_number(j, "stiffness_nm_per_rad");
  p.theta_min_rad = units::deg_to_rad(require_number(j, "theta_min_deg"));
  p.theta_max_rad = units::deg_to_rad(require_number(j, "theta_max_deg"));
  if (j.contains("omega_limit_rad_s")) {
    p.omega_limit_rad_s = require_number(j, "omega_limit_rad_s");
  }
  if (j.contains("use_stretch")) {
    if (!j["use_stretch"].is_boolean()) {
      throw IoError("config: 'use_stretch' must be a boolean");
    }
    p.use_stretch = j["use_stretch"].get<bool>();
  }
  p.validate();
  return p;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
}

FpamSpec load_fpam_spec(const std::string& path) {
  return fpam_from_json(load_json(path));
}

const MuscleUnit& ExosuitConfig::muscle(const std::string& name) const {
  if (name == "flexor") return flexor;
  if (name == "extensor") return extensor;
  if (name == "ulnar") return ulnar;
  if (name == "radial") return radial;
  throw IoError("unknown muscle '" + name +
                "' (expected flexor, extensor, ulnar or radial)");
}

namespace {

MuscleUnit muscle_from_json(const Json& j, const std::filesystem::path& base) {
  MuscleUnit m;
  if (!j.contains("fpam")) throw IoError("config: muscle needs an 'fpam' entry");
  if (j["fpam"].is_string()) {
    const std::filesystem::path ref = j["fpam"].get<std::string>();
    m.fpam = load_fpam_spec((ref.is_absolute() ? ref : base / ref).string());
  } else {
    m.fpam = fpam_from_json(j["fpam"]);
  }
  if (!j.contains("placement")) {
    throw IoError("config: muscle needs a 'placement' entry");
  }
  m.placement = placement_from_json(j["placement"]);
  if (!j.contains("stretch")) {
    throw IoError("config: muscle needs a 'stretch' entry");
  }
  m.stretch = stretch_from_json(j["stretch"]);
  return m;
}

}  // namespace

ExosuitConfig load_exosuit_config(const std::string& path) {
  const Json j = load_json(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  if (!j.contains("muscles") || !j["muscles"].is_object()) {
    throw IoError(path + ": missing 'muscles' object");
  }
  const Json& muscles = j["muscles"];
  for (const char* name : {"flexor", "extensor", "ulnar", "radial"}) {
    if (!muscles.contains(name)) {
      throw IoError(path + ": muscles must cover flexor, extensor, ulnar and "
                           "radial; missing '" + std::string(name) + "'");
    }
  }
  ExosuitConfig cfg;
  cfg.flexor = muscle_from_json(muscles["flexor"], base);
  cfg.extensor = muscle_from_json(muscles["extensor"], base);
  cfg.ulnar = muscle_from_json(muscles["ulnar"], base);
  cfg.radial = muscle_from_json(muscles["radial"], base);
  if (!j.contains("controller")) throw IoError(path + ": missing 'controller'");
  cfg.controller = controller_from_json(j["controller"]);
  if (!j.contains("plant")) throw IoError(path + ": missing 'plant'");
  cfg.plant = plant_from_json(j["plant"]);
  return cfg;
}

OptimizationProblem load_problem(const std::string& path) {
  const Json j = load_json(path);
  OptimizationProblem problem;
  if (!j.contains("bounds") || !j.contains("grid")) {
    throw IoError(path + ": problem needs 'bounds' and 'grid'");
  }
  const char* keys[4] = {"d1_m", "w1_m", "d2_m", "w2_m"};
  for (int i = 0; i < 4; ++i) {
    const Json& b = j["bounds"];
    if (!b.contains(keys[i]) || !b[keys[i]].is_array() ||
        b[keys[i]].size() != 2) {
      throw IoError(path + ": bounds." + keys[i] + " must be [lower, upper]");
    }
    problem.lower[i] = b[keys[i]][0].get<double>();
    problem.upper[i] = b[keys[i]][1].get<double>();
    problem.grid_step[i] = require_number(j["grid"], keys[i]);
  }
  problem.context.pressure_pa = require_number(j, "pressure_pa");
  problem.context.rw_m = require_number(j, "rw_m");
  problem.context.theta_sizing_rad =
      units::deg_to_rad(require_number(j, "theta_sizing_deg"));
  if (!j.contains("fpam")) throw IoError(path + ": problem needs 'fpam'");
  problem.context.fpam = fpam_from_json(j["fpam"]);
  return problem;
}

}  // namespace exo
