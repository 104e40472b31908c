#pragma once

#include <numbers>

// Internal computations are SI throughout (m, Pa, N, rad). These helpers
// convert at the CLI/file boundary, where angles are degrees, pressures kPa,
// and lengths cm.
namespace exo::units {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

constexpr double kpa_to_pa(double kpa) { return kpa * 1.0e3; }
constexpr double pa_to_kpa(double pa) { return pa * 1.0e-3; }

constexpr double cm_to_m(double cm) { return cm * 1.0e-2; }
constexpr double m_to_cm(double m) { return m * 1.0e2; }

// Stretching coefficients (force per squared displacement).
constexpr double n_per_cm2_to_n_per_m2(double k) { return k * 1.0e4; }
constexpr double n_per_m2_to_n_per_cm2(double k) { return k * 1.0e-4; }

}  // namespace exo::units
