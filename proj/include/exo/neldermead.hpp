#pragma once

#include <Eigen/Dense>
#include <functional>

namespace exo {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double simplex_tol = 1e-6;   ///< max vertex spread in original coordinates
  double f_tol = 1e-9;         ///< objective spread across the simplex
  double initial_step = 0.25;  ///< simplex edge in transformed coordinates
  double bound_snap = 1e-6;    ///< snap distance onto an active bound
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization inside a box. Bounds are enforced
/// with the smooth transform x = lo + (hi - lo) * sin^2(u), so vertices can
/// settle exactly on a bound without stalling the simplex. Dimensions with
/// lo == hi are held fixed. Objectives may return +inf for infeasible points.
NelderMeadResult minimize_bounded(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper, const NelderMeadOptions& options = {});

}  // namespace exo
