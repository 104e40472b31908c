#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exo/errors.hpp"
#include "exo/mountstretch.hpp"
#include "exo/units.hpp"
#include "fixtures.hpp"

using namespace exo;
using units::deg_to_rad;

TEST_CASE("displacement follows the square-root law") {
  const StretchModel model = fixtures::validation_stretch();
  CHECK(displacement(model, 0.0, Endpoint::Hand) == 0.0);
  // 109.75 N on the hand side displaces by sqrt(0.1) cm-scale units.
  CHECK(units::m_to_cm(displacement(model, 109.75, Endpoint::Hand)) ==
        doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
  const double dx = displacement(model, 40.0, Endpoint::Forearm);
  CHECK(displacement(model, 80.0, Endpoint::Forearm) ==
        doctest::Approx(std::sqrt(2.0) * dx).epsilon(1e-12));
  CHECK_THROWS_AS(displacement(model, -1.0, Endpoint::Hand), DomainError);
}

TEST_CASE("displacement inverts exactly") {
  const StretchModel model = fixtures::validation_stretch();
  for (double f : {0.5, 3.0, 55.0, 181.0}) {
    const double dx1 = displacement(model, f, Endpoint::Forearm);
    const double dx2 = displacement(model, f, Endpoint::Hand);
    CHECK(model.k1_n_per_m2 * dx1 * dx1 == doctest::Approx(f).epsilon(1e-12));
    CHECK(model.k2_n_per_m2 * dx2 * dx2 == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("coefficient fitting recovers planted values") {
  const StretchModel planted{5.0e5, 9.5e6};
  std::vector<StretchRecord> records;
  for (double f : {10.0, 25.0, 60.0, 120.0}) {
    records.push_back({f, std::sqrt(f / planted.k1_n_per_m2),
                       std::sqrt(f / planted.k2_n_per_m2)});
  }
  const StretchModel fitted = fit_coefficients(records);
  CHECK(fitted.k1_n_per_m2 ==
        doctest::Approx(planted.k1_n_per_m2).epsilon(1e-12));
  CHECK(fitted.k2_n_per_m2 ==
        doctest::Approx(planted.k2_n_per_m2).epsilon(1e-12));
}

TEST_CASE("single record gives the exact ratio") {
  std::vector<StretchRecord> records{{50.0, 0.01, 0.002}};
  const StretchModel fitted = fit_coefficients(records);
  CHECK(fitted.k1_n_per_m2 == doctest::Approx(50.0 / 1e-4).epsilon(1e-12));
  CHECK(fitted.k2_n_per_m2 == doctest::Approx(50.0 / 4e-6).epsilon(1e-12));
}

TEST_CASE("degenerate records are rejected") {
  std::vector<StretchRecord> empty;
  CHECK_THROWS_AS(fit_coefficients(empty), FitError);
  std::vector<StretchRecord> zeros{{10.0, 0.0, 0.0}, {20.0, 0.0, 0.0}};
  CHECK_THROWS_AS(fit_coefficients(zeros), FitError);
}

TEST_CASE("stretching shortens the muscle and lowers the torque here") {
  const FpamSpec spec = fixtures::flexor_spec();
  const PlacementParams placement = fixtures::validation_placement();
  const StretchModel model = fixtures::validation_stretch();
  const double p = 137.0e3;

  const auto [tau_plain, sol_plain] = torque(spec, p, placement, 0.0);
  const auto [tau_stretched, sol_stretched] =
      stretched_torque(spec, p, placement, model, 0.0);
  // The anchors are pulled toward each other, the path shortens, the muscle
  // is more contracted and pulls less.
  CHECK(sol_stretched.length_m < sol_plain.length_m);
  CHECK(std::abs(tau_stretched) < std::abs(tau_plain));
  CHECK(tau_stretched > 0.0);
}

TEST_CASE("slack muscle leaves the placement untouched") {
  const FpamSpec spec = fixtures::flexor_spec();
  const PlacementParams placement = fixtures::validation_placement();
  const StretchModel model = fixtures::validation_stretch();
  // Deflated and contracted past eps0: no pull, no displacement.
  const double theta = deg_to_rad(40.0);
  const auto [tau_stretched, sol] =
      stretched_torque(spec, 0.0, placement, model, theta);
  const auto [tau_plain, sol_plain] = torque(spec, 0.0, placement, theta);
  CHECK(tau_stretched == tau_plain);
  CHECK(tau_stretched == 0.0);
  CHECK(sol.length_m == sol_plain.length_m);
}

TEST_CASE("rigid anchors converge to the fixed-placement torque") {
  const FpamSpec spec = fixtures::flexor_spec();
  const PlacementParams placement = fixtures::validation_placement();
  const double p = 137.0e3;
  const double tau_plain = torque(spec, p, placement, 0.0).first;

  // The gap shrinks like 1/sqrt(K).
  double prev_gap = 1e300;
  for (double k : {1e7, 1e9, 1e11, 1e13}) {
    const StretchModel model{k, k};
    const double tau = stretched_torque(spec, p, placement, model, 0.0).first;
    const double gap = std::abs(tau - tau_plain);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  // Far into the rigid limit the difference is numerically negligible.
  const StretchModel rigid{1e19, 1e19};
  CHECK(std::abs(stretched_torque(spec, p, placement, rigid, 0.0).first -
                 tau_plain) < 1e-6);
}

TEST_CASE("stretched torque is continuous in the joint angle") {
  const FpamSpec spec = fixtures::flexor_spec();
  const PlacementParams placement = fixtures::validation_placement();
  const StretchModel model = fixtures::validation_stretch();
  const double p = 137.0e3;

  // 0.1 degree scan; a discontinuity would show up as a spike in the second
  // difference, while smooth variation contributes only O(h^2).
  std::vector<double> taus;
  std::vector<Regime> regimes;
  for (double deg = -67.5; deg <= 90.0 + 1e-9; deg += 0.1) {
    const auto [tau, sol] =
        stretched_torque(spec, p, placement, model, deg_to_rad(deg));
    taus.push_back(tau);
    regimes.push_back(sol.regime);
  }
  // A genuine jump between two samples dwarfs the neighbouring slopes;
  // slope kinks (regime switch, slack onset, elastic knee) do not.
  for (size_t i = 1; i + 2 < taus.size(); ++i) {
    if (regimes[i] != regimes[i + 1]) continue;  // regime boundary
    const double step = std::abs(taus[i + 1] - taus[i]);
    const double neighbours = std::max(std::abs(taus[i] - taus[i - 1]),
                                       std::abs(taus[i + 2] - taus[i + 1]));
    CHECK(step <= 3.0 * neighbours + 1e-4);
  }
}

TEST_CASE("iterated mode stays close to the single pass") {
  const FpamSpec spec = fixtures::flexor_spec();
  const PlacementParams placement = fixtures::validation_placement();
  const StretchModel model = fixtures::validation_stretch();
  StretchOptions iterate;
  iterate.iterate = true;
  const double single =
      stretched_torque(spec, 137.0e3, placement, model, 0.0).first;
  const double converged =
      stretched_torque(spec, 137.0e3, placement, model, 0.0, iterate).first;
  // The fixed point differs from the one-shot estimate, but not wildly.
  CHECK(std::abs(converged - single) < 0.5 * std::abs(single));
}
