#include "exo/wristgeom.hpp"

#include <algorithm>
#include <cmath>

#include "exo/errors.hpp"
#include "exo/units.hpp"

namespace exo {

namespace {

// Tangency window on the normalized discriminant (rw^2 - h^2)/rw^2.
constexpr double kTangencyTol = 1e-12;
// Wrap angles slightly below zero (numerical tangency) are clamped.
constexpr double kPhiTol = 1e-9;

Eigen::Rotation2D<double> joint_rotation(double theta_rad) {
  return Eigen::Rotation2D<double>(theta_rad);
}

// Distance from the wrist center to the chord between the anchors, measured
// on the segment (not the infinite line): a taut muscle only touches the
// wrist if the segment itself would penetrate the circle.
double segment_distance_to_center(const Eigen::Vector2d& p1,
                                  const Eigen::Vector2d& p2) {
  const Eigen::Vector2d d = p2 - p1;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) {
    throw GeometryError("degenerate placement: mounting points coincide");
  }
  const double t = std::clamp(-p1.dot(d) / len2, 0.0, 1.0);
  return (p1 + t * d).norm();
}

// Tangent points from an external point onto the wrist circle, via the
// Thales circle over the segment O-P. Returns the candidate in the muscle's
// half-plane (larger y).
Eigen::Vector2d muscle_side_tangent_point(const Eigen::Vector2d& p,
                                          double rw) {
  const double r2 = p.squaredNorm();
  const double tangent_len2 = r2 - rw * rw;
  if (!(tangent_len2 > 0.0)) {
    throw GeometryError("wrap construction: anchor on or inside the wrist circle");
  }
  const Eigen::Vector2d base = (rw * rw / r2) * p;
  const Eigen::Vector2d perp(-p.y(), p.x());
  const Eigen::Vector2d offset = (rw * std::sqrt(tangent_len2) / r2) * perp;
  const Eigen::Vector2d a = base + offset;
  const Eigen::Vector2d b = base - offset;
  return a.y() >= b.y() ? a : b;
}

}  // namespace

void PlacementParams::validate() const {
  if (!(d1_m > 0.0 && w1_m > 0.0 && d2_m > 0.0 && w2_m > 0.0 && rw_m > 0.0)) {
    throw GeometryError("PlacementParams: all lengths must be positive");
  }
  if (!(rw_m < std::hypot(d1_m, w1_m)) || !(rw_m < std::hypot(d2_m, w2_m))) {
    throw GeometryError(
        "PlacementParams: mounting points must lie outside the wrist circle");
  }
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Straight: return "straight";
    case Regime::Tangent: return "tangent";
    case Regime::Wrapped: return "wrapped";
  }
  return "unknown";
}

Eigen::Vector2d forearm_anchor(const PlacementParams& p) {
  return {-p.d1_m, p.w1_m};
}

Eigen::Vector2d hand_anchor(const PlacementParams& p, double theta_rad) {
  return joint_rotation(theta_rad) * Eigen::Vector2d(p.d2_m, p.w2_m);
}

Regime classify_regime(const PlacementParams& p, double theta_rad) {
  p.validate();
  const double h =
      segment_distance_to_center(forearm_anchor(p), hand_anchor(p, theta_rad));
  const double disc = (p.rw_m * p.rw_m - h * h) / (p.rw_m * p.rw_m);
  if (std::abs(disc) < kTangencyTol) return Regime::Tangent;
  return disc > 0.0 ? Regime::Wrapped : Regime::Straight;
}

double straight_length(const PlacementParams& p, double theta_rad) {
  const double ct = std::cos(theta_rad);
  const double st = std::sin(theta_rad);
  const double x = -p.d1_m - p.d2_m * ct + p.w2_m * st;
  const double y = p.w1_m - p.d2_m * st - p.w2_m * ct;
  return std::hypot(x, y);
}

GeometrySolution wrapped_geometry(const PlacementParams& p, double theta_rad) {
  p.validate();
  const Eigen::Vector2d p1 = forearm_anchor(p);
  const Eigen::Vector2d p2 = hand_anchor(p, theta_rad);
  const double rw = p.rw_m;
  const double r1 = p1.norm();
  const double r2 = p2.norm();
  if (!(rw < r1) || !(rw < r2)) {
    throw GeometryError("wrapped_geometry: wrist radius reaches an anchor");
  }

  const Eigen::Vector2d q1 = muscle_side_tangent_point(p1, rw);
  // Angle of O->Q1 from the +y axis, positive toward +x. The wrap proceeds
  // in the direction of increasing from-y angle.
  const double psi = std::atan2(q1.x(), q1.y());
  double phi = units::kPi / 2.0 - theta_rad -
               (psi + std::acos(rw / r2) + std::asin(p.w2_m / r2));

  GeometrySolution sol;
  sol.regime = Regime::Wrapped;
  sol.psi_rad = psi;
  if (phi < -kPhiTol) {
    throw GeometryError(
        "wrapped_geometry: negative wrap angle; the straight model applies");
  }
  if (phi < 0.0) phi = 0.0;
  if (phi > units::kPi) {
    phi = units::kPi;
    sol.phi_clamped = true;
  }
  sol.phi_rad = phi;

  const double beta2 = psi + phi;  // from-y angle of the last touch point
  const Eigen::Vector2d q2 = rw * Eigen::Vector2d(std::sin(beta2), std::cos(beta2));
  sol.q1 = q1;
  sol.q2 = q2;
  sol.length_m = std::sqrt(r1 * r1 - rw * rw) + rw * phi +
                 std::sqrt(r2 * r2 - rw * rw);
  const double p2q2 = (q2 - p2).norm();
  if (!(p2q2 > 0.0)) {
    throw GeometryError("wrapped_geometry: hand anchor coincides with touch point");
  }
  sol.moment_arm_m = (p2.x() * q2.y() - p2.y() * q2.x()) / p2q2;
  return sol;
}

GeometrySolution solve_geometry(const PlacementParams& p, double theta_rad) {
  const Regime regime = classify_regime(p, theta_rad);
  if (regime == Regime::Wrapped) return wrapped_geometry(p, theta_rad);

  GeometrySolution sol;
  sol.regime = regime;
  sol.length_m = straight_length(p, theta_rad);
  const double num =
      (p.d1_m * p.d2_m - p.w1_m * p.w2_m) * std::sin(theta_rad) +
      (p.d1_m * p.w2_m + p.d2_m * p.w1_m) * std::cos(theta_rad);
  sol.moment_arm_m = num / sol.length_m;
  return sol;
}

double straight_torque(double force_n, const PlacementParams& p,
                       double theta_rad) {
  const double num =
      (p.d1_m * p.d2_m - p.w1_m * p.w2_m) * std::sin(theta_rad) +
      (p.d1_m * p.w2_m + p.d2_m * p.w1_m) * std::cos(theta_rad);
  return force_n * num / straight_length(p, theta_rad);
}

double wrapped_torque(double force_n, const PlacementParams& p,
                      double theta_rad) {
  const GeometrySolution sol = wrapped_geometry(p, theta_rad);
  const double beta2 = sol.psi_rad + sol.phi_rad;
  const double cb = std::cos(beta2);
  const double sb = std::sin(beta2);
  const double ct = std::cos(theta_rad);
  const double st = std::sin(theta_rad);
  const double hx = p.d2_m * ct - p.w2_m * st;  // hand anchor coordinates
  const double hy = p.d2_m * st + p.w2_m * ct;
  const double num = hx * cb - hy * sb;
  const double den = std::hypot(p.rw_m * sb - hx, p.rw_m * cb - hy);
  return force_n * p.rw_m * num / den;
}

std::pair<double, GeometrySolution> torque(const FpamSpec& spec, double p_pa,
                                           const PlacementParams& p,
                                           double theta_rad,
                                           PressurePolicy policy) {
  const GeometrySolution sol = solve_geometry(p, theta_rad);
  const double force = fpam_force(spec, p_pa, sol.length_m, policy);
  const double tau = sol.regime == Regime::Wrapped
                         ? wrapped_torque(force, p, theta_rad)
                         : straight_torque(force, p, theta_rad);
  return {tau, sol};
}

std::pair<double, GeometrySolution> mirrored_torque(const FpamSpec& spec,
                                                    double p_pa,
                                                    const PlacementParams& p,
                                                    double theta_rad,
                                                    PressurePolicy policy) {
  auto [tau, sol] = torque(spec, p_pa, p, -theta_rad, policy);
  sol.moment_arm_m = -sol.moment_arm_m;
  return {-tau, sol};
}

}  // namespace exo
