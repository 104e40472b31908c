#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "exo/fpam.hpp"
#include "exo/mountstretch.hpp"
#include "exo/neldermead.hpp"
#include "exo/wristgeom.hpp"

namespace exo {

/// Target torque-vs-angle curve: the raw measured samples plus a dense
/// natural-cubic-spline resampling used by the objective.
struct ReferenceTorque {
  Eigen::VectorXd raw_theta_rad, raw_tau_nm;
  Eigen::VectorXd theta_rad, tau_nm;
};

/// Spline-resamples the raw curve to n uniformly spaced angles.
ReferenceTorque interpolate_reference(const Eigen::VectorXd& theta_rad,
                                      const Eigen::VectorXd& tau_nm, int n);

/// Everything the torque model needs besides the four free placement
/// parameters. The actuator's fully stretched length is sized per candidate
/// from the path length at the maximal stretching angle.
struct DesignContext {
  FpamSpec fpam;  ///< l0_m is recomputed per candidate
  double pressure_pa = 0.0;
  double rw_m = 0.0;
  double theta_sizing_rad = 0.0;
  PressurePolicy pressure_policy = PressurePolicy::ClampToRange;
};

/// Path length at the maximal stretching angle; the fully stretched length
/// that lets the joint reach that angle with the muscle taut.
double size_initial_length(const PlacementParams& p, double theta_sizing_rad);

/// Modeled torque for a candidate placement (l0 sized from the context).
double modeled_torque(const DesignContext& ctx, const PlacementParams& p,
                      double theta_rad);

/// Sum of positive torque deficits over the dense reference grid; surplus
/// contributes nothing. Infeasible geometry scores +inf so a simplex can
/// retreat from it.
double objective(const Eigen::Vector4d& x, const ReferenceTorque& ref,
                 const DesignContext& ctx);

struct OptimizationProblem {
  Eigen::Vector4d lower, upper;      ///< bounds on (d1, w1, d2, w2), m
  Eigen::Vector4d grid_step;         ///< multi-start seed resolution, m
  DesignContext context;
  NelderMeadOptions nm;
};

struct SeedTrace {
  Eigen::Vector4d seed, best;
  double objective = 0.0;
};

struct OptimizationResult {
  PlacementParams best;
  double objective_nm = 0.0;
  std::vector<SeedTrace> seeds;
};

/// Bounded Nelder-Mead from every grid seed; deterministic best-by-value
/// reduction with ties to the lexicographically first seed. threads = 0
/// picks the hardware concurrency.
OptimizationResult optimize_placement(const OptimizationProblem& problem,
                                      const ReferenceTorque& ref,
                                      int threads = 0);

/// Smallest pressure whose optimized placement fully dominates the
/// reference, located by bisection at the given resolution.
double find_min_pressure(const OptimizationProblem& problem,
                         const ReferenceTorque& ref, double p_max_pa,
                         double resolution_pa = 1000.0, double p_min_pa = 0.0,
                         int threads = 0);

struct TorqueMeasurement {
  double p_pa = 0.0;
  double theta_rad = 0.0;
  double tau_nm = 0.0;
};

struct WristRadiusScan {
  double rw_lo_m = 0.01;
  double rw_hi_m = 0.07;
  double step_m = 1e-4;
};

/// Exhaustive scan for the wrist radius minimizing the summed RMS error of
/// the straight- and wrapped-regime partitions. Ties break toward the
/// smaller radius.
double fit_wrist_radius(std::span<const TorqueMeasurement> measured,
                        const FpamSpec& spec, const PlacementParams& placement,
                        const StretchModel* stretch = nullptr,
                        const WristRadiusScan& scan = {},
                        PressurePolicy policy = PressurePolicy::Strict);

/// Smallest positive joint angle where the modeled torque reaches zero,
/// bisected to the given resolution. The torque must be positive at zero.
double predict_rom(const FpamSpec& spec, double p_pa,
                   const PlacementParams& placement,
                   double resolution_rad = 1.7453292519943295e-4,
                   PressurePolicy policy = PressurePolicy::Strict);

}  // namespace exo
