#include "exo/mountstretch.hpp"

#include <cmath>

#include "exo/errors.hpp"

namespace exo {

void StretchModel::validate() const {
  if (!(k1_n_per_m2 > 0.0) || !(k2_n_per_m2 > 0.0)) {
    throw DomainError("StretchModel: coefficient magnitudes must be positive");
  }
}

double displacement(const StretchModel& model, double force_n, Endpoint which) {
  if (force_n < 0.0) {
    throw DomainError("displacement: force must be nonnegative");
  }
  const double k =
      which == Endpoint::Forearm ? model.k1_n_per_m2 : model.k2_n_per_m2;
  return std::sqrt(force_n / std::abs(k));
}

namespace {

struct ForceDirections {
  Eigen::Vector2d at_forearm;  // unit vector of the pull on the forearm anchor
  Eigen::Vector2d at_hand;
};

ForceDirections force_directions(const PlacementParams& p, double theta_rad,
                                 const GeometrySolution& sol) {
  const Eigen::Vector2d p1 = forearm_anchor(p);
  const Eigen::Vector2d p2 = hand_anchor(p, theta_rad);
  if (sol.regime == Regime::Wrapped) {
    return {(sol.q1 - p1).normalized(), (sol.q2 - p2).normalized()};
  }
  return {(p2 - p1).normalized(), (p1 - p2).normalized()};
}

PlacementParams displaced_placement(const PlacementParams& p, double theta_rad,
                                    const Eigen::Vector2d& p1,
                                    const Eigen::Vector2d& p2) {
  PlacementParams out = p;
  out.d1_m = -p1.x();
  out.w1_m = p1.y();
  const Eigen::Vector2d hand = Eigen::Rotation2D<double>(-theta_rad) * p2;
  out.d2_m = hand.x();
  out.w2_m = hand.y();
  try {
    out.validate();
  } catch (const GeometryError&) {
    throw GeometryError(
        "stretched_torque: displaced anchor violates the placement geometry");
  }
  return out;
}

}  // namespace

std::pair<double, GeometrySolution> stretched_torque(
    const FpamSpec& spec, double p_pa, const PlacementParams& initial,
    const StretchModel& model, double theta_rad, const StretchOptions& options,
    PressurePolicy policy) {
  model.validate();
  GeometrySolution sol = solve_geometry(initial, theta_rad);
  double force = fpam_force(spec, p_pa, sol.length_m, policy);
  if (force <= 0.0) {
    // Slack muscle: nothing pulls on the anchors.
    return {0.0, sol};
  }

  double dx1_prev = 0.0, dx2_prev = 0.0;
  const int rounds = options.iterate ? options.max_iterations : 1;
  PlacementParams displaced = initial;
  for (int round = 0; round < rounds; ++round) {
    const double dx1 = displacement(model, force, Endpoint::Forearm);
    const double dx2 = displacement(model, force, Endpoint::Hand);
    const ForceDirections dirs = force_directions(initial, theta_rad, sol);
    const Eigen::Vector2d p1 = forearm_anchor(initial) + dx1 * dirs.at_forearm;
    const Eigen::Vector2d p2 =
        hand_anchor(initial, theta_rad) + dx2 * dirs.at_hand;
    displaced = displaced_placement(initial, theta_rad, p1, p2);

    if (!options.iterate) break;
    const GeometrySolution displaced_sol = solve_geometry(displaced, theta_rad);
    force = fpam_force(spec, p_pa, displaced_sol.length_m, policy);
    if (std::abs(dx1 - dx1_prev) < options.tol_m &&
        std::abs(dx2 - dx2_prev) < options.tol_m) {
      break;
    }
    dx1_prev = dx1;
    dx2_prev = dx2;
  }
  return torque(spec, p_pa, displaced, theta_rad, policy);
}

StretchModel fit_coefficients(std::span<const StretchRecord> records) {
  if (records.empty()) {
    throw FitError("fit_coefficients: no records");
  }
  double k1_sum = 0.0, k2_sum = 0.0;
  int k1_count = 0, k2_count = 0;
  for (const auto& rec : records) {
    if (rec.force_n < 0.0) {
      throw DomainError("fit_coefficients: negative force");
    }
    if (rec.dx1_m > 0.0) {
      k1_sum += rec.force_n / (rec.dx1_m * rec.dx1_m);
      ++k1_count;
    }
    if (rec.dx2_m > 0.0) {
      k2_sum += rec.force_n / (rec.dx2_m * rec.dx2_m);
      ++k2_count;
    }
  }
  if (k1_count == 0 || k2_count == 0) {
    throw FitError("fit_coefficients: all displacements are zero on one side");
  }
  StretchModel model{k1_sum / k1_count, k2_sum / k2_count};
  model.validate();
  return model;
}

}  // namespace exo
