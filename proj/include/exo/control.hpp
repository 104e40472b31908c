#pragma once

#include <span>
#include <vector>

#include "exo/fpam.hpp"
#include "exo/mountstretch.hpp"
#include "exo/wristgeom.hpp"

namespace exo {

struct ControllerConfig {
  double gain_kpa_per_deg = 0.0083;
  double dt_s = 0.014;
  double p_init_kpa = 13.8;
  double p_threshold_kpa = 13.8;  ///< antagonist fast-release threshold
  double p_min_kpa = 0.0;
  double p_max_kpa = 137.0;
  double regulator_lag_s = 0.0;  ///< optional first-order pressure dynamics
  double settle_window_s = 2.0;  ///< excluded from the RMS tracking error

  void validate() const;
};

/// Pressures of one antagonistic pair. "positive" drives the joint angle up.
struct PairPressures {
  double positive_kpa = 0.0;
  double negative_kpa = 0.0;
};

/// One tick of the antagonistic feedback law: the gain-scaled error inflates
/// the agonist and deflates the antagonist, twice as fast once the
/// antagonist sits strictly above the release threshold. Both pressures stay
/// inside the regulator limits.
PairPressures controller_step(const ControllerConfig& cfg,
                              const PairPressures& state,
                              double theta_desired_deg,
                              double theta_actual_deg);

/// One muscle of the plant.
struct MuscleUnit {
  FpamSpec fpam;
  PlacementParams placement;
  StretchModel stretch;
};

/// An antagonistic pair acting on one rotational degree of freedom. The
/// negative muscle is mounted mirror-image across the joint plane.
struct DofPair {
  MuscleUnit positive;
  MuscleUnit negative;
};

/// Passive damped torsional surrogate for the human wrist.
struct PlantConfig {
  double inertia_kg_m2 = 0.002;
  double damping_nms_per_rad = 0.05;
  double stiffness_nm_per_rad = 0.1;
  double theta_min_rad = -1.5707963267948966;
  double theta_max_rad = 1.5707963267948966;
  double omega_limit_rad_s = 100.0;
  bool use_stretch = true;

  void validate() const;
};

struct PlantState {
  double theta_rad = 0.0;
  double omega_rad_s = 0.0;
};

/// Semi-implicit Euler step of one degree of freedom under the net muscle,
/// spring and damper torques, with hard stops at the joint limits.
PlantState plant_step(const PlantConfig& plant, const DofPair& pair,
                      const PlantState& state, const PairPressures& pressures,
                      double dt_s);

struct TrajectoryPoint {
  double t_s = 0.0;
  double fe_deg = 0.0;  ///< desired flexion(+)/extension(-) angle
  double ur_deg = 0.0;  ///< desired ulnar(+)/radial(-) deviation angle
};

struct LogRow {
  double t_s = 0.0;
  double fe_des_deg = 0.0, fe_act_deg = 0.0;
  double ur_des_deg = 0.0, ur_act_deg = 0.0;
  double p_flex_kpa = 0.0, p_ext_kpa = 0.0;
  double p_uln_kpa = 0.0, p_rad_kpa = 0.0;
};

struct TrackingLog {
  std::vector<LogRow> rows;
  double rms_fe_deg = 0.0;
  double rms_ur_deg = 0.0;
};

/// Closed-loop simulation of both degree-of-freedom pairs over a desired
/// trajectory (linearly interpolated between its points). Deterministic:
/// identical inputs produce identical logs.
TrackingLog run_tracking(const ControllerConfig& cfg, const PlantConfig& plant,
                         const DofPair& fe, const DofPair& ur,
                         std::span<const TrajectoryPoint> trajectory);

}  // namespace exo
