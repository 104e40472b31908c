#pragma once

#include <Eigen/Dense>
#include <utility>

#include "exo/fpam.hpp"

namespace exo {

/// Planar mounting geometry of one muscle relative to the wrist center O.
/// The forearm anchor sits at P1 = (-d1, w1); the hand anchor sits at
/// (d2, w2) in the hand frame and rotates with the joint angle.
struct PlacementParams {
  double d1_m = 0.0;
  double w1_m = 0.0;
  double d2_m = 0.0;
  double w2_m = 0.0;
  double rw_m = 0.0;  ///< wrist circle radius

  void validate() const;  ///< throws GeometryError on violated invariants
};

enum class Regime { Straight, Tangent, Wrapped };

const char* regime_name(Regime r);

/// Solved muscle path at one joint angle.
struct GeometrySolution {
  Regime regime = Regime::Straight;
  double length_m = 0.0;
  double moment_arm_m = 0.0;  ///< signed torque per unit force
  double psi_rad = 0.0;       ///< wrapped only: from-y angle of the first touch point
  double phi_rad = 0.0;       ///< wrapped only: wrap arc angle, >= 0
  bool phi_clamped = false;   ///< wrap angle fell outside [0, pi] and was clamped
  Eigen::Vector2d q1{0.0, 0.0};  ///< wrapped only: first touch point
  Eigen::Vector2d q2{0.0, 0.0};  ///< wrapped only: last touch point
};

/// Forearm anchor P1 in the joint frame.
Eigen::Vector2d forearm_anchor(const PlacementParams& p);

/// Hand anchor P2 at joint angle theta (counterclockwise positive).
Eigen::Vector2d hand_anchor(const PlacementParams& p, double theta_rad);

/// Straight vs wrapped decision, by distance of the chord P1P2 from O.
/// Equivalent to the sign of the line/circle intersection discriminant but
/// free of the vertical-slope singularity.
Regime classify_regime(const PlacementParams& p, double theta_rad);

/// Chord length |P1 P2| (meaningful in the Straight/Tangent regime).
double straight_length(const PlacementParams& p, double theta_rad);

/// Tangent-arc-tangent path around the wrist circle.
GeometrySolution wrapped_geometry(const PlacementParams& p, double theta_rad);

/// Classifies the regime and solves the matching path.
GeometrySolution solve_geometry(const PlacementParams& p, double theta_rad);

/// Closed-form straight-regime torque for force magnitude f directed from
/// the hand anchor toward the forearm anchor.
double straight_torque(double force_n, const PlacementParams& p,
                       double theta_rad);

/// Closed-form wrapped-regime torque for force magnitude f directed from the
/// hand anchor toward the last touch point.
double wrapped_torque(double force_n, const PlacementParams& p,
                      double theta_rad);

/// Full pipeline: classify, solve path length, evaluate muscle force at that
/// length, dispatch to the matching torque formula.
std::pair<double, GeometrySolution> torque(
    const FpamSpec& spec, double p_pa, const PlacementParams& p,
    double theta_rad, PressurePolicy policy = PressurePolicy::Strict);

/// Same muscle mounted mirror-image across the joint plane (the antagonist
/// of an antagonistic pair): torque negated, angle reflected.
std::pair<double, GeometrySolution> mirrored_torque(
    const FpamSpec& spec, double p_pa, const PlacementParams& p,
    double theta_rad, PressurePolicy policy = PressurePolicy::Strict);

}  // namespace exo
