#include "exo/fpam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exo/errors.hpp"
#include "exo/units.hpp"

namespace exo {

void FpamSpec::validate() const {
  if (!(l0_m > 0.0) || !(r0_m > 0.0) || !(t_m > 0.0) || !(e_pa > 0.0)) {
    throw DomainError("FpamSpec: l0, r0, t and E must all be positive");
  }
  if (!(eps0 >= 0.0 && eps0 < 1.0)) {
    throw DomainError("FpamSpec: eps0 must lie in [0, 1)");
  }
  if (eps_max_by_pressure.empty()) {
    throw DomainError("FpamSpec: eps_max table is empty");
  }
  double prev_p = -1.0;
  for (const auto& entry : eps_max_by_pressure) {
    if (entry.p_pa < 0.0) {
      throw DomainError("FpamSpec: negative pressure in eps_max table");
    }
    if (entry.p_pa <= prev_p) {
      throw DomainError("FpamSpec: eps_max table must be sorted by pressure");
    }
    prev_p = entry.p_pa;
    if (!(entry.eps_max >= eps0 && entry.eps_max < 1.0)) {
      throw DomainError("FpamSpec: every eps_max must satisfy eps0 <= eps_max < 1");
    }
  }
}

double fiber_orientation(double eps_max) {
  if (!(eps_max > 0.0 && eps_max < 1.0)) {
    throw DomainError("fiber_orientation: eps_max must lie in (0, 1)");
  }
  const double arg = eps_max * eps_max - 2.0 * eps_max + 2.0 / 3.0;
  if (arg < 0.0) {
    throw DomainError(
        "fiber_orientation: eps_max exceeds the geometric contraction limit "
        "1 - 1/sqrt(3)");
  }
  // -asin(sqrt(arg)/(eps_max - 1)); the denominator is negative on (0,1),
  // so the result is a positive angle below pi/2.
  return -std::asin(std::sqrt(arg) / (eps_max - 1.0));
}

double pressure_term_root(double alpha0_rad) {
  const double c = std::cos(alpha0_rad);
  if (!(c > 0.0)) {
    throw DomainError("pressure_term_root: alpha0 must lie in (-pi/2, pi/2)");
  }
  return 1.0 - 1.0 / (std::sqrt(3.0) * c);
}

double eps_max_at(const FpamSpec& spec, double p_pa, PressurePolicy policy) {
  const auto& table = spec.eps_max_by_pressure;
  if (table.empty()) throw DomainError("eps_max_at: empty table");
  if (p_pa < table.front().p_pa || p_pa > table.back().p_pa) {
    if (policy == PressurePolicy::Strict) {
      throw DomainError("eps_max_at: pressure " + std::to_string(p_pa) +
                        " Pa outside calibrated range");
    }
    return p_pa < table.front().p_pa ? table.front().eps_max
                                     : table.back().eps_max;
  }
  auto hi = std::lower_bound(
      table.begin(), table.end(), p_pa,
      [](const PressureEpsMax& e, double p) { return e.p_pa < p; });
  if (hi == table.begin()) return hi->eps_max;
  auto lo = std::prev(hi);
  if (hi == table.end()) return lo->eps_max;
  const double f = (p_pa - lo->p_pa) / (hi->p_pa - lo->p_pa);
  return lo->eps_max + f * (hi->eps_max - lo->eps_max);
}

double contraction_ratio(const FpamSpec& spec, double length_m) {
  if (!(length_m > 0.0)) {
    throw DomainError("contraction_ratio: length must be positive");
  }
  return (spec.l0_m - length_m) / spec.l0_m;
}

double pressure_force_term(double p_pa, double eps, double alpha0_rad,
                           double r0_m) {
  if (p_pa == 0.0) return 0.0;
  const double s = std::sin(alpha0_rad);
  const double t = std::tan(alpha0_rad);
  const double em1 = eps - 1.0;
  return units::kPi * p_pa * r0_m * r0_m *
         (3.0 * em1 * em1 / (t * t) - 1.0 / (s * s));
}

double elastic_force_term(double e_pa, double t_m, double eps0, double eps,
                          double r0_m) {
  if (eps >= eps0) return 0.0;
  return 2.0 * units::kPi * e_pa * t_m * (eps0 - eps) * r0_m;
}

double fpam_force_at_eps(const FpamSpec& spec, double p_pa, double eps,
                         PressurePolicy policy) {
  if (eps >= 1.0) {
    throw DomainError("fpam_force: contraction ratio must be below 1");
  }
  if (p_pa < 0.0) {
    throw DomainError("fpam_force: pressure must be nonnegative");
  }
  double pressure_term = 0.0;
  double eps_max = spec.eps0;
  if (p_pa > 0.0) {
    eps_max = eps_max_at(spec, p_pa, policy);
    const double alpha0 = fiber_orientation(eps_max);
    pressure_term = pressure_force_term(p_pa, eps, alpha0, spec.r0_m);
  }
  const double elastic =
      elastic_force_term(spec.e_pa, spec.t_m, spec.eps0, eps, spec.r0_m);
  double force = pressure_term + elastic;
  // Slack muscle: contracted past both limits, buckles instead of pushing.
  if (force < 0.0 && eps > eps_max && eps > spec.eps0) force = 0.0;
  return force;
}

double fpam_force(const FpamSpec& spec, double p_pa, double length_m,
                  PressurePolicy policy) {
  return fpam_force_at_eps(spec, p_pa, contraction_ratio(spec, length_m),
                           policy);
}

}  // namespace exo
