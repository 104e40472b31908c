#include "exo/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "exo/errors.hpp"

namespace exo {

namespace {

struct BoxTransform {
  Eigen::VectorXd lower, upper;
  std::vector<int> free_dims;

  Eigen::VectorXd to_x(const Eigen::VectorXd& u) const {
    Eigen::VectorXd x = lower;
    for (size_t j = 0; j < free_dims.size(); ++j) {
      const int i = free_dims[j];
      const double s = std::sin(u[j]);
      x[i] = lower[i] + (upper[i] - lower[i]) * s * s;
    }
    return x;
  }

  Eigen::VectorXd to_u(const Eigen::VectorXd& x) const {
    Eigen::VectorXd u(free_dims.size());
    for (size_t j = 0; j < free_dims.size(); ++j) {
      const int i = free_dims[j];
      const double f =
          std::clamp((x[i] - lower[i]) / (upper[i] - lower[i]), 0.0, 1.0);
      u[j] = std::asin(std::sqrt(f));
    }
    return u;
  }
};

}  // namespace

NelderMeadResult minimize_bounded(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper, const NelderMeadOptions& options) {
  const Eigen::Index dims = start.size();
  if (lower.size() != dims || upper.size() != dims) {
    throw FitError("minimize_bounded: bound sizes do not match the start point");
  }
  BoxTransform box{lower, upper, {}};
  for (Eigen::Index i = 0; i < dims; ++i) {
    if (lower[i] > upper[i]) {
      throw FitError("minimize_bounded: lower bound above upper bound");
    }
    if (lower[i] < upper[i]) box.free_dims.push_back(static_cast<int>(i));
  }

  NelderMeadResult result;
  if (box.free_dims.empty()) {
    result.x = lower;
    result.f = objective(result.x);
    result.converged = true;
    return result;
  }

  const int n = static_cast<int>(box.free_dims.size());
  const Eigen::VectorXd u0 = box.to_u(start);

  std::vector<Eigen::VectorXd> verts(n + 1, u0);
  std::vector<double> fvals(n + 1);
  for (int i = 0; i < n; ++i) verts[i + 1][i] += options.initial_step;
  for (int i = 0; i <= n; ++i) fvals[i] = objective(box.to_x(verts[i]));

  constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return fvals[a] < fvals[b]; });
    std::vector<Eigen::VectorXd> v2(n + 1);
    std::vector<double> f2(n + 1);
    for (int i = 0; i <= n; ++i) {
      v2[i] = verts[idx[i]];
      f2[i] = fvals[idx[i]];
    }
    verts.swap(v2);
    fvals.swap(f2);
  };

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    order();

    // Convergence in original coordinates.
    double spread = 0.0;
    const Eigen::VectorXd x_best = box.to_x(verts[0]);
    for (int i = 1; i <= n; ++i) {
      spread = std::max(spread, (box.to_x(verts[i]) - x_best).norm());
    }
    const double fspread = std::abs(fvals[n] - fvals[0]);
    if (spread < options.simplex_tol || fspread < options.f_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += verts[i];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - verts[n]);
    const double f_ref = objective(box.to_x(reflected));

    if (f_ref < fvals[0]) {
      const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double f_exp = objective(box.to_x(expanded));
      if (f_exp < f_ref) {
        verts[n] = expanded;
        fvals[n] = f_exp;
      } else {
        verts[n] = reflected;
        fvals[n] = f_ref;
      }
    } else if (f_ref < fvals[n - 1]) {
      verts[n] = reflected;
      fvals[n] = f_ref;
    } else {
      const bool outside = f_ref < fvals[n];
      const Eigen::VectorXd contracted =
          outside ? centroid + rho * (reflected - centroid)
                  : centroid + rho * (verts[n] - centroid);
      const double f_con = objective(box.to_x(contracted));
      if (f_con < (outside ? f_ref : fvals[n])) {
        verts[n] = contracted;
        fvals[n] = f_con;
      } else {
        for (int i = 1; i <= n; ++i) {
          verts[i] = verts[0] + sigma * (verts[i] - verts[0]);
          fvals[i] = objective(box.to_x(verts[i]));
        }
      }
    }
  }

  order();
  result.iterations = iter;
  result.x = box.to_x(verts[0]);
  result.f = fvals[0];

  // Land exactly on a bound when the optimum sits within snapping distance.
  bool snapped = false;
  for (Eigen::Index i = 0; i < dims; ++i) {
    if (result.x[i] - lower[i] < options.bound_snap && result.x[i] != lower[i]) {
      result.x[i] = lower[i];
      snapped = true;
    } else if (upper[i] - result.x[i] < options.bound_snap &&
               result.x[i] != upper[i]) {
      result.x[i] = upper[i];
      snapped = true;
    }
  }
  if (snapped) {
    const double f_snapped = objective(result.x);
    if (f_snapped <= result.f || !std::isfinite(result.f)) {
      result.f = f_snapped;
    } else {
      result.x = box.to_x(verts[0]);  // snapping made it worse, keep original
    }
  }
  return result;
}

}  // namespace exo
