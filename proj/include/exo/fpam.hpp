#pragma once

#include <vector>

namespace exo {

/// How to treat a pressure outside the calibrated eps_max table.
enum class PressurePolicy {
  Strict,        ///< throw DomainError
  ClampToRange,  ///< use the nearest tabulated endpoint
};

struct PressureEpsMax {
  double p_pa = 0.0;
  double eps_max = 0.0;
};

/// Geometry and material parameters of one fabric pneumatic artificial
/// muscle, plus the per-pressure free-contraction limits that pin the fiber
/// orientation.
struct FpamSpec {
  double l0_m = 0.0;   ///< fully stretched, uninflated length
  double r0_m = 0.0;   ///< fully stretched radius
  double t_m = 0.0;    ///< fabric thickness
  double e_pa = 0.0;   ///< fabric elastic modulus
  double eps0 = 0.0;   ///< contraction ratio where deflated elastic force stops
  std::vector<PressureEpsMax> eps_max_by_pressure;  ///< sorted by pressure

  /// Throws DomainError when any invariant is violated.
  void validate() const;
};

/// Initial fiber orientation (rad) that places the pressure term's zero
/// crossing at the given contraction ratio. Domain: eps_max in (0,1) with
/// eps_max^2 - 2 eps_max + 2/3 >= 0 (i.e. eps_max <= 1 - 1/sqrt(3)).
double fiber_orientation(double eps_max);

/// Contraction ratio at which the pressure term with fiber angle alpha0
/// vanishes; inverse of fiber_orientation on its domain.
double pressure_term_root(double alpha0_rad);

/// Linear interpolation of the tabulated free-contraction limit in pressure.
double eps_max_at(const FpamSpec& spec, double p_pa,
                  PressurePolicy policy = PressurePolicy::Strict);

/// (l0 - l)/l0. Throws DomainError if length is nonpositive.
double contraction_ratio(const FpamSpec& spec, double length_m);

/// Pressure-dependent contraction force, oriented so that positive means
/// contractile pull: pi*P*r0^2*(3(eps-1)^2/tan(a0)^2 - 1/sin(a0)^2). The
/// published form carries the opposite sign; this orientation is the one
/// satisfying F(0) > 0 and F(eps_max) = 0.
double pressure_force_term(double p_pa, double eps, double alpha0_rad,
                           double r0_m);

/// Elastic pull of the stretched fabric, 2*pi*E*t*(eps0-eps)*r0 for
/// eps <= eps0 and exactly zero above.
double elastic_force_term(double e_pa, double t_m, double eps0, double eps,
                          double r0_m);

/// Axial tension (N, positive = pull) at contraction ratio eps. Negative
/// totals are clamped to zero once the muscle is slack (eps beyond both
/// eps_max(P) and eps0); fPAMs buckle rather than push.
double fpam_force_at_eps(const FpamSpec& spec, double p_pa, double eps,
                         PressurePolicy policy = PressurePolicy::Strict);

/// Axial tension at muscle length l (m). eps computed internally.
double fpam_force(const FpamSpec& spec, double p_pa, double length_m,
                  PressurePolicy policy = PressurePolicy::Strict);

}  // namespace exo
