#include "exo/spline.hpp"

#include <utility>

#include "exo/errors.hpp"

namespace exo {

CubicSpline::CubicSpline(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw FitError("CubicSpline: need at least two matching knots");
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw FitError("CubicSpline: knot abscissae must be strictly increasing");
    }
  }

  m_ = Eigen::VectorXd::Zero(n);
  if (n == 2) return;

  // Tridiagonal system for interior second derivatives, natural boundary.
  const Eigen::Index k = n - 2;
  Eigen::VectorXd diag(k), sub(k), sup(k), rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double h0 = x_[i + 1] - x_[i];
    const double h1 = x_[i + 2] - x_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    sub[i] = h0;
    sup[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 - (y_[i + 1] - y_[i]) / h0);
  }
  // Thomas algorithm.
  for (Eigen::Index i = 1; i < k; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (Eigen::Index i = k - 1; i >= 1; --i) {
    m_[i] = (rhs[i - 1] - sup[i - 1] * m_[i + 1]) / diag[i - 1];
  }
}

double CubicSpline::operator()(double x) const {
  const Eigen::Index n = x_.size();
  Eigen::Index lo = 0;
  Eigen::Index hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (x_[mid] <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double h = x_[hi] - x_[lo];
  const double a = (x_[hi] - x) / h;
  const double b = (x - x_[lo]) / h;
  return a * y_[lo] + b * y_[hi] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

}  // namespace exo
