#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "exo/fpam.hpp"

namespace exo {

struct TensileSample {
  double eps = 0.0;
  double force_n = 0.0;
};

/// Load-cell data grouped by pressure level.
struct TensileDataset {
  struct Level {
    double p_pa = 0.0;
    std::vector<TensileSample> samples;
  };
  std::vector<Level> levels;  ///< sorted by pressure

  void validate() const;  ///< >= 10 samples per level, eps in [-0.1, 1)
};

/// Least-squares polynomial approximation of one smoothed force curve. The
/// fit is carried out in a scaled abscissa u = (eps - center)/halfwidth for
/// conditioning.
struct PolynomialForceFit {
  double p_pa = 0.0;
  double center = 0.0;
  double halfwidth = 1.0;
  Eigen::VectorXd coeffs;  ///< c0..c_degree in u
  double rms_n = 0.0;
  double eps_lo = 0.0, eps_hi = 0.0;     ///< fitted data range
  std::optional<double> eps_max;         ///< downward zero crossing in (0,1)

  double evaluate(double eps) const;
};

/// Zero-pressure branch: amplitude*(exp(rate*(eps0-eps)) - 1) below eps0 and
/// exactly zero above; continuous at the knot.
struct ZeroPressureFit {
  double amplitude_n = 0.0;
  double rate = 0.0;
  double eps0 = 0.0;
  double rms_n = 0.0;

  double evaluate(double eps) const;
};

struct ForceCurveFit {
  std::vector<PolynomialForceFit> pressure_fits;  ///< nonzero pressures
  std::optional<ZeroPressureFit> zero_fit;
};

struct FitOptions {
  int smoothing_window = 11;  ///< moving-average width on cycle-merged data
  int poly_degree = 8;
};

/// Smooths each pressure level and fits the per-pressure curves. Nonzero
/// pressures get the polynomial; a zero-pressure level, when present, gets
/// the piecewise exponential.
ForceCurveFit fit_force_curves(const TensileDataset& data,
                               const FitOptions& options = {});

struct FabricConstants {
  double e_pa = 0.0;
  double t_m = 0.0;
};

struct PressureRadius {
  double p_pa = 0.0;
  double r0_m = 0.0;
};

/// Identified actuator parameters. The spec's r0 is the mean of the
/// per-pressure adjusted radii; the measured values ride along as metadata.
struct IdentifiedSpec {
  FpamSpec spec;
  std::vector<PressureRadius> r0_by_pressure;
  double measured_l0_m = 0.0;
  double measured_r0_m = 0.0;
};

/// Extracts eps_max per pressure from the fit zero crossings and adjusts r0
/// per pressure by least-squares matching the modeled force to the fitted
/// curve over [0, eps_max]. eps0 comes from the zero-pressure branch unless
/// overridden.
IdentifiedSpec identify_spec(const ForceCurveFit& fit, double measured_l0_m,
                             double measured_r0_m, const FabricConstants& fabric,
                             std::optional<double> eps0_override = {});

}  // namespace exo
