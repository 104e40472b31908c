#pragma once

#include <Eigen/Dense>

namespace exo {

/// Natural cubic spline interpolant (zero second derivative at both ends).
/// Outside the knot range the boundary cubics are extended.
class CubicSpline {
 public:
  CubicSpline(Eigen::VectorXd x, Eigen::VectorXd y);

  double operator()(double x) const;

  const Eigen::VectorXd& knots() const { return x_; }

 private:
  Eigen::VectorXd x_, y_, m_;  // knot second derivatives in m_
};

}  // namespace exo
