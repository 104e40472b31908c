#include "exo/tensile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "exo/errors.hpp"
#include "exo/neldermead.hpp"
#include "exo/units.hpp"

namespace exo {

namespace {

std::vector<TensileSample> sorted_smoothed(const std::vector<TensileSample>& in,
                                           int window) {
  std::vector<TensileSample> s = in;
  std::sort(s.begin(), s.end(),
            [](const TensileSample& a, const TensileSample& b) {
              return a.eps < b.eps;
            });
  if (window <= 1) return s;
  const int n = static_cast<int>(s.size());
  const int half = window / 2;
  std::vector<TensileSample> out = s;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += s[j].force_n;
    out[i].force_n = sum / (hi - lo + 1);
  }
  return out;
}

int count_distinct_eps(const std::vector<TensileSample>& sorted) {
  int distinct = sorted.empty() ? 0 : 1;
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].eps != sorted[i - 1].eps) ++distinct;
  }
  return distinct;
}

// First downward zero crossing of the fitted curve inside (0, 1).
std::optional<double> find_eps_max(const PolynomialForceFit& fit) {
  const double lo = std::max(fit.eps_lo, 0.0);
  const double hi = std::min(fit.eps_hi, 1.0 - 1e-12);
  if (!(hi > lo)) return std::nullopt;
  const int steps = 2000;
  double prev_eps = lo;
  double prev_f = fit.evaluate(lo);
  for (int i = 1; i <= steps; ++i) {
    const double eps = lo + (hi - lo) * i / steps;
    const double f = fit.evaluate(eps);
    if (prev_f > 0.0 && f <= 0.0) {
      double a = prev_eps, b = eps;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (a + b);
        (fit.evaluate(mid) > 0.0 ? a : b) = mid;
      }
      const double root = 0.5 * (a + b);
      if (root > 0.0 && root < 1.0) return root;
    }
    prev_eps = eps;
    prev_f = f;
  }
  return std::nullopt;
}

PolynomialForceFit fit_polynomial_level(const TensileDataset::Level& level,
                                        const FitOptions& options) {
  const auto data = sorted_smoothed(level.samples, options.smoothing_window);
  const int degree = options.poly_degree;
  if (count_distinct_eps(data) < degree + 1) {
    throw FitError("fit_force_curves: fewer than " +
                   std::to_string(degree + 1) +
                   " distinct contraction ratios at " +
                   std::to_string(units::pa_to_kpa(level.p_pa)) + " kPa");
  }

  PolynomialForceFit fit;
  fit.p_pa = level.p_pa;
  fit.eps_lo = data.front().eps;
  fit.eps_hi = data.back().eps;
  fit.center = 0.5 * (fit.eps_lo + fit.eps_hi);
  fit.halfwidth = 0.5 * (fit.eps_hi - fit.eps_lo);

  const int n = static_cast<int>(data.size());
  Eigen::MatrixXd vander(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    const double u = (data[i].eps - fit.center) / fit.halfwidth;
    double pow_u = 1.0;
    for (int j = 0; j <= degree; ++j) {
      vander(i, j) = pow_u;
      pow_u *= u;
    }
    rhs[i] = data[i].force_n;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vander);
  if (qr.rank() < degree + 1) {
    throw FitError("fit_force_curves: singular normal equations");
  }
  fit.coeffs = qr.solve(rhs);
  fit.rms_n = std::sqrt((vander * fit.coeffs - rhs).squaredNorm() / n);
  fit.eps_max = find_eps_max(fit);
  return fit;
}

ZeroPressureFit fit_zero_level(const TensileDataset::Level& level,
                               const FitOptions& options) {
  const auto data = sorted_smoothed(level.samples, options.smoothing_window);
  if (count_distinct_eps(data) < 3) {
    throw FitError("fit_force_curves: zero-pressure level needs >= 3 distinct "
                   "contraction ratios");
  }

  double peak = 0.0;
  for (const auto& s : data) peak = std::max(peak, s.force_n);
  if (!(peak > 0.0)) {
    throw FitError("fit_force_curves: zero-pressure level has no positive force");
  }

  // Knot guess: largest eps still carrying a noticeable force.
  double eps0_guess = data.back().eps;
  const double floor = std::max(0.01 * peak, 1e-3);
  for (const auto& s : data) {
    if (s.force_n > floor) eps0_guess = s.eps;
  }

  auto sse = [&](const Eigen::VectorXd& x) {
    const ZeroPressureFit candidate{x[0], x[1], x[2], 0.0};
    double acc = 0.0;
    for (const auto& s : data) {
      const double r = candidate.evaluate(s.eps) - s.force_n;
      acc += r * r;
    }
    return acc;
  };

  Eigen::VectorXd lower(3), upper(3);
  lower << 1e-4, 1e-2, std::max(data.front().eps + 1e-6, 1e-4);
  upper << 10.0 * peak, 200.0, 1.0 - 1e-6;

  NelderMeadOptions nm;
  nm.max_iterations = 4000;
  nm.simplex_tol = 1e-10;
  nm.f_tol = 1e-14;

  NelderMeadResult best;
  best.f = std::numeric_limits<double>::infinity();
  for (const double rate0 : {5.0, 20.0, 60.0}) {
    Eigen::VectorXd start(3);
    start << std::max(peak / std::expm1(rate0 * eps0_guess), 1e-3), rate0,
        std::clamp(eps0_guess, lower[2], upper[2]);
    const NelderMeadResult r = minimize_bounded(sse, start, lower, upper, nm);
    if (r.f < best.f) best = r;
  }
  if (!std::isfinite(best.f)) {
    throw FitError("fit_force_curves: zero-pressure fit did not converge");
  }

  ZeroPressureFit fit{best.x[0], best.x[1], best.x[2], 0.0};
  fit.rms_n = std::sqrt(best.f / data.size());
  return fit;
}

}  // namespace

void TensileDataset::validate() const {
  if (levels.empty()) throw DomainError("TensileDataset: no pressure levels");
  double prev_p = -1.0;
  for (const auto& level : levels) {
    if (level.p_pa < 0.0) {
      throw DomainError("TensileDataset: negative pressure level");
    }
    if (level.p_pa <= prev_p) {
      throw DomainError("TensileDataset: levels must be sorted by pressure");
    }
    prev_p = level.p_pa;
    if (level.samples.size() < 10) {
      throw DomainError("TensileDataset: every pressure level needs >= 10 samples");
    }
    for (const auto& s : level.samples) {
      if (!(s.eps >= -0.1 && s.eps < 1.0)) {
        throw DomainError("TensileDataset: contraction ratio outside [-0.1, 1)");
      }
    }
  }
}

double PolynomialForceFit::evaluate(double eps) const {
  const double u = (eps - center) / halfwidth;
  double acc = 0.0;
  for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) acc = acc * u + coeffs[j];
  return acc;
}

double ZeroPressureFit::evaluate(double eps) const {
  if (eps >= eps0) return 0.0;
  return amplitude_n * std::expm1(rate * (eps0 - eps));
}

ForceCurveFit fit_force_curves(const TensileDataset& data,
                               const FitOptions& options) {
  data.validate();
  ForceCurveFit result;
  for (const auto& level : data.levels) {
    if (level.p_pa == 0.0) {
      result.zero_fit = fit_zero_level(level, options);
    } else {
      result.pressure_fits.push_back(fit_polynomial_level(level, options));
    }
  }
  return result;
}

namespace {

// Minimizes sum (f_i - a_i r^2 - b_i r)^2 over r > 0; the stationary
// condition is the cubic 2 Saa r^3 + 3 Sab r^2 + (Sbb - 2 SaF) r - SbF = 0.
double best_radius(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& f) {
  const double saa = a.squaredNorm();
  const double sab = a.dot(b);
  const double sbb = b.squaredNorm();
  const double saf = a.dot(f);
  const double sbf = b.dot(f);
  if (!(saa > 0.0)) throw FitError("identify_spec: degenerate force model");

  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  const double c2 = 3.0 * sab / (2.0 * saa);
  const double c1 = (sbb - 2.0 * saf) / (2.0 * saa);
  const double c0 = -sbf / (2.0 * saa);
  companion(0, 2) = -c0;
  companion(1, 2) = -c1;
  companion(2, 2) = -c2;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;

  const Eigen::Vector3cd roots = companion.eigenvalues();
  auto sse = [&](double r) {
    return (f - a * r * r - b * r).squaredNorm();
  };
  double best_r = -1.0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(roots[i].imag()) > 1e-9 * std::max(1.0, std::abs(roots[i].real()))) {
      continue;
    }
    const double r = roots[i].real();
    if (r > 0.0 && sse(r) < best_sse) {
      best_sse = sse(r);
      best_r = r;
    }
  }
  if (best_r <= 0.0) {
    throw FitError("identify_spec: no positive radius minimizes the mismatch");
  }
  return best_r;
}

}  // namespace

IdentifiedSpec identify_spec(const ForceCurveFit& fit, double measured_l0_m,
                             double measured_r0_m,
                             const FabricConstants& fabric,
                             std::optional<double> eps0_override) {
  if (fit.pressure_fits.size() < 2) {
    throw FitError("identify_spec: need fits for at least two pressure levels");
  }
  double eps0 = 0.0;
  if (eps0_override) {
    eps0 = *eps0_override;
  } else if (fit.zero_fit) {
    eps0 = fit.zero_fit->eps0;
  } else {
    throw FitError(
        "identify_spec: eps0 unavailable (no zero-pressure fit and no override)");
  }

  IdentifiedSpec out;
  out.measured_l0_m = measured_l0_m;
  out.measured_r0_m = measured_r0_m;

  std::vector<PressureEpsMax> table;
  table.push_back({0.0, eps0});

  constexpr int kGrid = 101;
  for (const auto& pf : fit.pressure_fits) {
    if (!pf.eps_max) {
      throw FitError("identify_spec: no zero crossing in (0,1) at " +
                     std::to_string(units::pa_to_kpa(pf.p_pa)) + " kPa");
    }
    const double eps_max = *pf.eps_max;
    const double alpha0 = fiber_orientation(eps_max);

    Eigen::VectorXd a(kGrid), b(kGrid), f(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      const double eps = eps_max * i / (kGrid - 1);
      a[i] = pressure_force_term(pf.p_pa, eps, alpha0, 1.0);
      b[i] = elastic_force_term(fabric.e_pa, fabric.t_m, eps0, eps, 1.0);
      f[i] = pf.evaluate(eps);
    }
    out.r0_by_pressure.push_back({pf.p_pa, best_radius(a, b, f)});
    table.push_back({pf.p_pa, eps_max});
  }

  std::sort(table.begin(), table.end(),
            [](const PressureEpsMax& x, const PressureEpsMax& y) {
              return x.p_pa < y.p_pa;
            });

  double r0_mean = 0.0;
  for (const auto& pr : out.r0_by_pressure) r0_mean += pr.r0_m;
  r0_mean /= static_cast<double>(out.r0_by_pressure.size());

  out.spec.l0_m = measured_l0_m;
  out.spec.r0_m = r0_mean;
  out.spec.t_m = fabric.t_m;
  out.spec.e_pa = fabric.e_pa;
  out.spec.eps0 = eps0;
  out.spec.eps_max_by_pressure = std::move(table);
  out.spec.validate();
  return out;
}

}  // namespace exo
