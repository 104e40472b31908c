#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "exo/errors.hpp"
#include "exo/tensile.hpp"
#include "exo/units.hpp"
#include "fixtures.hpp"

using namespace exo;

namespace {

// Forward-model tensile data for one pressure from the force law with a
// planted per-pressure radius.
TensileDataset::Level synthetic_level(const FpamSpec& spec, double p_pa,
                                      double r0_m, int n = 240) {
  FpamSpec local = spec;
  local.r0_m = r0_m;
  TensileDataset::Level level;
  level.p_pa = p_pa;
  const double eps_max = eps_max_at(spec, p_pa);
  const double lo = -0.02, hi = std::min(eps_max + 0.04, 0.9);
  for (int i = 0; i < n; ++i) {
    const double eps = lo + (hi - lo) * i / (n - 1);
    // Keep the raw pressure+elastic sum; negative tails are real in the
    // measurement (the fit needs the crossing).
    double alpha0 = fiber_orientation(eps_max);
    const double f =
        pressure_force_term(p_pa, eps, alpha0, local.r0_m) +
        elastic_force_term(local.e_pa, local.t_m, local.eps0, eps, local.r0_m);
    level.samples.push_back({eps, f});
  }
  return level;
}

TensileDataset::Level synthetic_zero_level(double amplitude, double rate,
                                           double eps0, int n = 240) {
  const ZeroPressureFit truth{amplitude, rate, eps0, 0.0};
  TensileDataset::Level level;
  level.p_pa = 0.0;
  for (int i = 0; i < n; ++i) {
    const double eps = -0.02 + (0.45 + 0.02) * i / (n - 1);
    level.samples.push_back({eps, truth.evaluate(eps)});
  }
  return level;
}

}  // namespace

TEST_CASE("fit recovers planted contraction limits") {
  const FpamSpec spec = fixtures::flexor_spec();
  TensileDataset data;
  data.levels.push_back(synthetic_zero_level(2.0, 18.0, spec.eps0));
  for (const auto& pr : fixtures::flexor_radii()) {
    data.levels.push_back(synthetic_level(spec, pr.p_pa, pr.r0_m));
  }

  const ForceCurveFit fit = fit_force_curves(data, {1, 8});  // noise free
  REQUIRE(fit.pressure_fits.size() == 4);
  for (const auto& pf : fit.pressure_fits) {
    REQUIRE(pf.eps_max.has_value());
    CHECK(std::abs(*pf.eps_max - eps_max_at(spec, pf.p_pa)) < 0.005);
  }
  // Noise-free forward data is reproduced well inside the RMS budget.
  for (const auto& pf : fit.pressure_fits) {
    CHECK(pf.rms_n < 0.5);
  }
}

TEST_CASE("fit is robust to mild noise and smoothing") {
  const FpamSpec spec = fixtures::flexor_spec();
  TensileDataset data;
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 0.8);
  for (const auto& pr : fixtures::flexor_radii()) {
    auto level = synthetic_level(spec, pr.p_pa, pr.r0_m, 600);
    for (auto& s : level.samples) s.force_n += noise(rng);
    data.levels.push_back(level);
  }
  const ForceCurveFit fit = fit_force_curves(data);  // default window 11
  for (const auto& pf : fit.pressure_fits) {
    REQUIRE(pf.eps_max.has_value());
    CHECK(std::abs(*pf.eps_max - eps_max_at(spec, pf.p_pa)) < 0.01);
  }
}

TEST_CASE("zero-pressure branch: exact recovery and continuity at the knot") {
  TensileDataset data;
  data.levels.push_back(synthetic_zero_level(1.7, 22.0, 0.153));
  const FpamSpec spec = fixtures::flexor_spec();
  data.levels.push_back(synthetic_level(spec, 137.0e3, 0.0126));

  const ForceCurveFit fit = fit_force_curves(data, {1, 8});
  REQUIRE(fit.zero_fit.has_value());
  const ZeroPressureFit& z = *fit.zero_fit;
  CHECK(z.eps0 == doctest::Approx(0.153).epsilon(1e-3));
  CHECK(z.rms_n < 1e-3);

  // Continuity: zero from above, tending to zero from below.
  CHECK(z.evaluate(z.eps0) == 0.0);
  CHECK(z.evaluate(z.eps0 + 1e-9) == 0.0);
  CHECK(std::abs(z.evaluate(z.eps0 - 1e-9)) < 1e-6);
}

TEST_CASE("degenerate datasets are rejected") {
  TensileDataset data;
  TensileDataset::Level level;
  level.p_pa = 34.0e3;
  for (int i = 0; i < 20; ++i) level.samples.push_back({0.1, 5.0});
  data.levels.push_back(level);
  CHECK_THROWS_AS(fit_force_curves(data), FitError);  // one distinct eps

  TensileDataset short_data;
  short_data.levels.push_back({34.0e3, {{0.0, 1.0}, {0.1, 2.0}}});
  CHECK_THROWS_AS(fit_force_curves(short_data), DomainError);  // < 10 samples

  TensileDataset bad_eps;
  TensileDataset::Level bad_level;
  bad_level.p_pa = 34.0e3;
  for (int i = 0; i < 12; ++i) bad_level.samples.push_back({1.2, 5.0});
  bad_eps.levels.push_back(bad_level);
  CHECK_THROWS_AS(fit_force_curves(bad_eps), DomainError);
}

TEST_CASE("identification matches the planted per-pressure radii") {
  const FpamSpec spec = fixtures::flexor_spec();
  TensileDataset data;
  data.levels.push_back(synthetic_zero_level(2.0, 18.0, spec.eps0));
  for (const auto& pr : fixtures::flexor_radii()) {
    data.levels.push_back(synthetic_level(spec, pr.p_pa, pr.r0_m));
  }
  const ForceCurveFit fit = fit_force_curves(data, {1, 8});
  const IdentifiedSpec identified =
      identify_spec(fit, 0.34, 0.0102, {spec.e_pa, spec.t_m});

  REQUIRE(identified.r0_by_pressure.size() == 4);
  for (size_t i = 0; i < identified.r0_by_pressure.size(); ++i) {
    const double planted = fixtures::flexor_radii()[i].r0_m;
    CHECK(std::abs(identified.r0_by_pressure[i].r0_m - planted) < 2e-4);
    // All identified radii sit in the adjusted band.
    CHECK(identified.r0_by_pressure[i].r0_m > 0.0118);
    CHECK(identified.r0_by_pressure[i].r0_m < 0.0128);
  }
  // Measured values ride along unchanged.
  CHECK(identified.measured_r0_m == 0.0102);
  CHECK(identified.measured_l0_m == 0.34);
  CHECK(identified.spec.l0_m == 0.34);
  CHECK(identified.spec.eps0 == doctest::Approx(spec.eps0).epsilon(1e-3));
  // The scalar radius is the mean of the per-pressure values.
  double mean = 0.0;
  for (const auto& pr : identified.r0_by_pressure) mean += pr.r0_m;
  mean /= identified.r0_by_pressure.size();
  CHECK(identified.spec.r0_m == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("identification requires a zero crossing") {
  const FpamSpec spec = fixtures::flexor_spec();
  TensileDataset data;
  // Truncate the data range well before the crossing: no root to find.
  FpamSpec planted = spec;
  planted.r0_m = 0.0126;
  TensileDataset::Level level;
  level.p_pa = 137.0e3;
  for (int i = 0; i < 60; ++i) {
    const double eps = -0.02 + (0.10 + 0.02) * i / 59.0;
    level.samples.push_back({eps, fpam_force_at_eps(planted, level.p_pa, eps)});
  }
  data.levels.push_back(synthetic_level(spec, 34.0e3, 0.0127));
  data.levels.push_back(level);

  const ForceCurveFit fit = fit_force_curves(data, {1, 8});
  CHECK_THROWS_AS(identify_spec(fit, 0.34, 0.0102, {spec.e_pa, spec.t_m}, 0.153),
                  FitError);
}

TEST_CASE("identification needs two pressure levels") {
  const FpamSpec spec = fixtures::flexor_spec();
  TensileDataset data;
  data.levels.push_back(synthetic_level(spec, 137.0e3, 0.0126));
  const ForceCurveFit fit = fit_force_curves(data, {1, 8});
  CHECK_THROWS_AS(identify_spec(fit, 0.34, 0.0102, {spec.e_pa, spec.t_m}, 0.153),
                  FitError);
}
