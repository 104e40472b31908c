#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exo/errors.hpp"
#include "exo/fpam.hpp"
#include "exo/units.hpp"
#include "fixtures.hpp"

using namespace exo;

namespace {

// Independent evaluation of both force components, written out term by term.
double force_oracle(double p_pa, double eps, double eps_max, double eps0,
                    double r0, double t, double e) {
  const double cos2 = 1.0 / (3.0 * (1.0 - eps_max) * (1.0 - eps_max));
  const double sin2 = 1.0 - cos2;
  const double pressure =
      units::kPi * p_pa * r0 * r0 *
      (3.0 * (eps - 1.0) * (eps - 1.0) * cos2 / sin2 - 1.0 / sin2);
  const double elastic =
      eps <= eps0 ? 2.0 * units::kPi * e * t * (eps0 - eps) * r0 : 0.0;
  return pressure + elastic;
}

}  // namespace

TEST_CASE("fiber orientation matches the known contraction limits") {
  // A limit of 0.28 corresponds to roughly 0.641 rad.
  CHECK(fiber_orientation(0.28) == doctest::Approx(0.641).epsilon(1e-3));

  // Substituting the limit back into the pressure term gives zero force.
  for (double eps_max : {0.153, 0.277, 0.28, 0.296, 0.301, 0.303}) {
    const double alpha0 = fiber_orientation(eps_max);
    CHECK(alpha0 > 0.0);
    CHECK(alpha0 < units::kPi / 2.0);
    const double f = pressure_force_term(137.0e3, eps_max, alpha0, 0.0126);
    CHECK(std::abs(f) < 1e-9 * 137.0e3 * 0.0126 * 0.0126);
  }
}

TEST_CASE("fiber orientation domain") {
  CHECK_THROWS_AS(fiber_orientation(0.0), DomainError);
  CHECK_THROWS_AS(fiber_orientation(1.0), DomainError);
  CHECK_THROWS_AS(fiber_orientation(-0.1), DomainError);
  // Above the geometric limit the square root argument turns negative.
  CHECK_THROWS_AS(fiber_orientation(0.44), DomainError);
  // Exactly at the boundary the angle is finite (and zero).
  const double boundary = 1.0 - 1.0 / std::sqrt(3.0);
  CHECK(std::isfinite(fiber_orientation(boundary)));
}

TEST_CASE("fiber orientation and the pressure-term root invert each other") {
  for (int i = 0; i <= 200; ++i) {
    const double alpha0 = 0.6 + (1.2 - 0.6) * i / 200.0;
    const double root = pressure_term_root(alpha0);
    if (root > 0.0 && root < 1.0) {
      CHECK(fiber_orientation(root) == doctest::Approx(alpha0).epsilon(1e-6));
    } else {
      // Outside the physical contraction range the op rejects the input.
      CHECK_THROWS_AS(fiber_orientation(root), DomainError);
    }
  }
}

TEST_CASE("force law reproduces the independent oracle at full stretch") {
  FpamSpec spec = fixtures::flexor_spec();
  const double p = 137.0e3;
  // Both terms evaluated independently: about 181 N at eps = 0.
  const double expected =
      force_oracle(p, 0.0, 0.277, spec.eps0, spec.r0_m, spec.t_m, spec.e_pa);
  CHECK(expected == doctest::Approx(181.0).epsilon(5e-3));
  CHECK(fpam_force_at_eps(spec, p, 0.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("force vanishes at the free contraction limit") {
  const FpamSpec spec = fixtures::flexor_spec();
  for (const auto& entry : spec.eps_max_by_pressure) {
    if (entry.p_pa == 0.0) continue;
    CHECK(std::abs(fpam_force_at_eps(spec, entry.p_pa, entry.eps_max)) < 1e-6);
  }
}

TEST_CASE("force is strictly decreasing and single-crossing on [0, eps_max]") {
  const FpamSpec spec = fixtures::flexor_spec();
  for (const auto& entry : spec.eps_max_by_pressure) {
    if (entry.p_pa == 0.0) continue;
    double prev = fpam_force_at_eps(spec, entry.p_pa, 0.0);
    for (int i = 1; i <= 500; ++i) {
      const double eps = entry.eps_max * i / 500.0;
      const double f = fpam_force_at_eps(spec, entry.p_pa, eps);
      CHECK(f < prev);
      if (i < 500) CHECK(f > 0.0);
      prev = f;
    }
  }
}

TEST_CASE("zero pressure leaves only the elastic pull") {
  const FpamSpec spec = fixtures::flexor_spec();
  CHECK(fpam_force_at_eps(spec, 0.0, spec.eps0 + 0.01) == 0.0);
  CHECK(fpam_force_at_eps(spec, 0.0, 0.9) == 0.0);
  CHECK(fpam_force_at_eps(spec, 0.0, spec.eps0 - 0.01) > 0.0);
}

TEST_CASE("elastic term is continuous at eps0 and zero above") {
  const FpamSpec spec = fixtures::flexor_spec();
  const double below = elastic_force_term(spec.e_pa, spec.t_m, spec.eps0,
                                          spec.eps0 - 1e-9, spec.r0_m);
  const double at = elastic_force_term(spec.e_pa, spec.t_m, spec.eps0,
                                       spec.eps0, spec.r0_m);
  const double above = elastic_force_term(spec.e_pa, spec.t_m, spec.eps0,
                                          spec.eps0 + 1e-9, spec.r0_m);
  CHECK(at == 0.0);
  CHECK(above == 0.0);
  CHECK(below == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(below > 0.0);
}

TEST_CASE("slack muscle is clamped to zero instead of pushing") {
  const FpamSpec spec = fixtures::flexor_spec();
  const double eps_past = 0.32;  // beyond every tabulated limit and eps0
  CHECK(fpam_force_at_eps(spec, 137.0e3, eps_past) == 0.0);
}

TEST_CASE("contraction ratio and force domain errors") {
  const FpamSpec spec = fixtures::flexor_spec();
  CHECK_THROWS_AS(fpam_force(spec, 137.0e3, 0.0), DomainError);
  CHECK_THROWS_AS(fpam_force(spec, 137.0e3, -0.1), DomainError);
  CHECK_THROWS_AS(fpam_force_at_eps(spec, 137.0e3, 1.0), DomainError);
  CHECK_THROWS_AS(fpam_force_at_eps(spec, -1.0, 0.1), DomainError);
}

TEST_CASE("pressure interpolation of the contraction limit") {
  const FpamSpec spec = fixtures::flexor_spec();
  CHECK(eps_max_at(spec, 34.0e3) == doctest::Approx(0.303));
  CHECK(eps_max_at(spec, 51.0e3) == doctest::Approx(0.5 * (0.303 + 0.296)));
  CHECK_THROWS_AS(eps_max_at(spec, 200.0e3), DomainError);
  CHECK(eps_max_at(spec, 200.0e3, PressurePolicy::ClampToRange) ==
        doctest::Approx(0.277));
  CHECK_THROWS_AS(fpam_force_at_eps(spec, 200.0e3, 0.1), DomainError);
  CHECK(fpam_force_at_eps(spec, 200.0e3, 0.1, PressurePolicy::ClampToRange) >
        0.0);
}

TEST_CASE("spec validation") {
  FpamSpec spec = fixtures::flexor_spec();
  CHECK_NOTHROW(spec.validate());
  spec.eps0 = 0.4;  // above one of the tabulated limits
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = fixtures::flexor_spec();
  spec.r0_m = 0.0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
  spec = fixtures::flexor_spec();
  spec.eps_max_by_pressure.clear();
  CHECK_THROWS_AS(spec.validate(), DomainError);
}
