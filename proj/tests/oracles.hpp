#pragma once

// Independent numeric oracles used by the unit and acceptance tests. These
// deliberately avoid the closed-form torque and length expressions under
// test: torques come from explicit planar vectors and a cross product,
// wrapped path lengths from a brute-force tangent-arc-tangent search.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "exo/wristgeom.hpp"

namespace oracles {

inline double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Torque of a force of magnitude f applied at the hand anchor toward a
// target point, about the wrist center.
inline double cross_product_torque(const exo::PlacementParams& p,
                                   double theta_rad, double force_n,
                                   const Eigen::Vector2d& toward) {
  const Eigen::Vector2d p2 = exo::hand_anchor(p, theta_rad);
  const Eigen::Vector2d dir = (toward - p2).normalized();
  return cross2(p2, force_n * dir);
}

inline double straight_torque_oracle(const exo::PlacementParams& p,
                                     double theta_rad, double force_n) {
  return cross_product_torque(p, theta_rad, force_n, exo::forearm_anchor(p));
}

inline double wrapped_torque_oracle(const exo::PlacementParams& p,
                                    double theta_rad, double force_n) {
  const exo::GeometrySolution sol = exo::wrapped_geometry(p, theta_rad);
  return cross_product_torque(p, theta_rad, force_n, sol.q2);
}

// Distance of the segment a-b from the origin.
inline double segment_clearance(const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return a.norm();
  const double t = std::clamp(-a.dot(d) / len2, 0.0, 1.0);
  return (a + t * d).norm();
}

// Shortest taut path from P1 to P2 that touches the wrist circle: brute
// force over discretized touch-point pairs, traversing the arc in the
// direction of decreasing polar angle (the wrap direction for anchors in
// the positive-w half plane). Legs that would cut through the wrist disk
// are rejected.
inline double wrapped_length_oracle(const exo::PlacementParams& p,
                                    double theta_rad, int resolution = 3000) {
  const Eigen::Vector2d p1 = exo::forearm_anchor(p);
  const Eigen::Vector2d p2 = exo::hand_anchor(p, theta_rad);
  const double rw = p.rw_m;
  const double clearance = rw * (1.0 - 1e-9);
  const double two_pi = 2.0 * M_PI;

  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < resolution; ++i) {
    const double a1 = two_pi * i / resolution;
    const Eigen::Vector2d c1(rw * std::cos(a1), rw * std::sin(a1));
    if (segment_clearance(p1, c1) < clearance) continue;
    const double leg1 = (c1 - p1).norm();
    for (int j = 0; j < resolution; ++j) {
      const double a2 = two_pi * j / resolution;
      double arc = a1 - a2;  // clockwise from c1 to c2
      if (arc < 0.0) arc += two_pi;
      if (arc > M_PI) continue;  // taut wraps never exceed half a turn here
      const Eigen::Vector2d c2(rw * std::cos(a2), rw * std::sin(a2));
      if (segment_clearance(c2, p2) < clearance) continue;
      const double total = leg1 + rw * arc + (c2 - p2).norm();
      best = std::min(best, total);
    }
  }
  return best;
}

}  // namespace oracles
