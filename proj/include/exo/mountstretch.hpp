#pragma once

#include <span>
#include <utility>

#include "exo/fpam.hpp"
#include "exo/wristgeom.hpp"

namespace exo {

/// Second-order stretching law F = K * dx^2 for each anchor. Coefficients
/// are stored as magnitudes; the published negative sign encodes the
/// displacement direction (anchors pulled toward each other), which is
/// applied explicitly in stretched_torque.
struct StretchModel {
  double k1_n_per_m2 = 0.0;  ///< forearm side
  double k2_n_per_m2 = 0.0;  ///< hand side

  void validate() const;
};

enum class Endpoint { Forearm, Hand };

/// Anchor displacement dx = sqrt(F/|K|) along the muscle force direction.
double displacement(const StretchModel& model, double force_n, Endpoint which);

struct StretchOptions {
  bool iterate = false;   ///< off: the single-pass reference behavior
  double tol_m = 1e-6;    ///< displacement convergence for iterate mode
  int max_iterations = 50;
};

/// Torque with anchor stretching: force at the initial placement sets the
/// displacements, the anchors shift along the local force directions, and
/// the torque is evaluated at the displaced placement.
std::pair<double, GeometrySolution> stretched_torque(
    const FpamSpec& spec, double p_pa, const PlacementParams& initial,
    const StretchModel& model, double theta_rad,
    const StretchOptions& options = {},
    PressurePolicy policy = PressurePolicy::Strict);

struct StretchRecord {
  double force_n = 0.0;
  double dx1_m = 0.0;
  double dx2_m = 0.0;
};

/// Per-record K_i = F/dx_i^2, averaged arithmetically. Records with zero
/// displacement on a side carry no information for that side and are skipped.
StretchModel fit_coefficients(std::span<const StretchRecord> records);

}  // namespace exo
