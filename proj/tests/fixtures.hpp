#pragma once

// Shared test fixtures: the measured flexor actuator and the validation-run
// placement and stretching parameters of the physical prototype.

#include "exo/control.hpp"
#include "exo/fpam.hpp"
#include "exo/mountstretch.hpp"
#include "exo/tensile.hpp"
#include "exo/wristgeom.hpp"

namespace fixtures {

inline exo::FpamSpec flexor_spec() {
  exo::FpamSpec s;
  s.l0_m = 0.32;
  s.r0_m = 0.0126;
  s.t_m = 0.08e-3;
  s.e_pa = 9.06e6;
  s.eps0 = 0.153;
  s.eps_max_by_pressure = {{0.0, 0.153},
                           {34.0e3, 0.303},
                           {68.0e3, 0.296},
                           {103.0e3, 0.301},
                           {137.0e3, 0.277}};
  return s;
}

// Per-pressure adjusted radii matching the measured force curves.
inline std::vector<exo::PressureRadius> flexor_radii() {
  return {{34.0e3, 0.0127}, {68.0e3, 0.0122}, {103.0e3, 0.0119},
          {137.0e3, 0.0126}};
}

inline exo::PlacementParams validation_placement() {
  return {0.1947, 0.0493, 0.0830, 0.0338, 0.0399};
}

inline exo::StretchModel validation_stretch() {
  return {43.36e4, 1097.50e4};  // magnitudes of the fitted coefficients
}

inline exo::MuscleUnit flexor_unit() {
  return {flexor_spec(), validation_placement(), validation_stretch()};
}

// The four muscles of the passive-wrist demonstrations share the flexor's
// actuator parameters; lengths and placements were measured per muscle.
inline exo::MuscleUnit muscle_unit(double d1_cm, double w1_cm, double d2_cm,
                                   double w2_cm, double l0_cm) {
  exo::MuscleUnit m = flexor_unit();
  m.fpam.l0_m = l0_cm * 1e-2;
  m.placement = {d1_cm * 1e-2, w1_cm * 1e-2, d2_cm * 1e-2, w2_cm * 1e-2,
                 0.0399};
  return m;
}

inline exo::DofPair fe_pair() {
  return {muscle_unit(20.5, 5.7, 4.0, 4.0, 29.0),
          muscle_unit(24.5, 3.7, 5.4, 4.1, 32.0)};
}

inline exo::DofPair ur_pair() {
  return {muscle_unit(21.1, 7.1, 1.0, 3.4, 28.5),
          muscle_unit(21.3, 4.8, 2.3, 6.0, 27.0)};
}

}  // namespace fixtures
