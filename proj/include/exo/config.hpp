#pragma once

#include <string>

#include <json.hpp>

#include "exo/control.hpp"
#include "exo/designopt.hpp"
#include "exo/fpam.hpp"
#include "exo/mountstretch.hpp"
#include "exo/tensile.hpp"
#include "exo/wristgeom.hpp"

namespace exo {

using Json = nlohmann::ordered_json;

Json to_json(const FpamSpec& spec);
Json to_json(const IdentifiedSpec& identified);
Json to_json(const PlacementParams& p);
Json to_json(const StretchModel& m);

FpamSpec fpam_from_json(const Json& j);
PlacementParams placement_from_json(const Json& j);
StretchModel stretch_from_json(const Json& j);
ControllerConfig controller_from_json(const Json& j);
PlantConfig plant_from_json(const Json& j);

FpamSpec load_fpam_spec(const std::string& path);
void save_json(const Json& j, const std::string& path);
Json load_json(const std::string& path);

/// Full exosuit description: the four muscles plus controller and plant.
struct ExosuitConfig {
  MuscleUnit flexor, extensor, ulnar, radial;
  ControllerConfig controller;
  PlantConfig plant;

  const MuscleUnit& muscle(const std::string& name) const;
  DofPair fe_pair() const { return {flexor, extensor}; }
  DofPair ur_pair() const { return {ulnar, radial}; }
};

/// Loads the exosuit JSON; a muscle's "fpam" entry may be an inline object
/// or a path to a spec file, resolved relative to the config's directory.
ExosuitConfig load_exosuit_config(const std::string& path);

/// Optimization problem JSON: bounds, grid, pressure_pa, rw_m,
/// theta_sizing_deg and the fixed actuator parameters.
OptimizationProblem load_problem(const std::string& path);

}  // namespace exo
