#include "l2control/spd.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "l2control/errors.hpp"

namespace l2control {

SPDMatrix SPDMatrix::factor(const Mat& w) {
  const Eigen::Index n = w.rows();
  if (n == 0 || n != w.cols()) throw InvalidInput("spd: matrix must be square and nonempty");
  if (!w.allFinite()) throw NotPositiveDefinite("spd: matrix has nonfinite entries");

  const double scale = w.cwiseAbs().maxCoeff();
  const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-13 * std::max(scale, 1e-300))
    throw InvalidInput("spd: matrix is not symmetric (relative asymmetry " +
                       std::to_string(asym / scale) + ")");

  SPDMatrix out;
  out.w_ = (w + w.transpose()) / 2.0;
  out.l_ = Mat::Zero(n, n);

  // Plain unpivoted Cholesky; n <= 16 here so there is nothing to block.
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = out.w_(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= out.l_(j, k) * out.l_(j, k);
    if (!(pivot > 0.0))
      throw NotPositiveDefinite("spd: nonpositive pivot " + std::to_string(pivot) +
                                " at index " + std::to_string(j));
    out.l_(j, j) = std::sqrt(pivot);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = out.w_(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= out.l_(i, k) * out.l_(j, k);
      out.l_(i, j) = s / out.l_(j, j);
    }
  }
  return out;
}

Vec SPDMatrix::forward_solve(const Vec& rhs) const {
  const Eigen::Index n = l_.rows();
  Vec z = rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < i; ++k) z(i) -= l_(i, k) * z(k);
    z(i) /= l_(i, i);
  }
  return z;
}

Vec SPDMatrix::solve(const Vec& rhs) const {
  const Eigen::Index n = l_.rows();
  Vec y = forward_solve(rhs);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    for (Eigen::Index k = i + 1; k < n; ++k) y(i) -= l_(k, i) * y(k);
    y(i) /= l_(i, i);
  }
  return y;
}

double SPDMatrix::quadratic_inverse(const Vec& x) const { return forward_solve(x).squaredNorm(); }

double SPDMatrix::inverse_norm() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(l_)};
  const double smin = svd.singularValues().minCoeff();
  return 1.0 / (smin * smin);
}

SPDMatrix spd_factor(const Mat& w) { return SPDMatrix::factor(w); }

Vec spd_solve(const SPDMatrix& w, const Vec& rhs) {
  if (rhs.size() != w.dim()) throw InvalidInput("spd solve: dimension mismatch");
  return w.solve(rhs);
}

}  // namespace l2control
