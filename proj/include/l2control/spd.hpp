#pragma once

#include "l2control/types.hpp"

namespace l2control {

// Symmetric positive definite matrix held through its Cholesky factor.
// factor() symmetrizes first and refuses input that is visibly asymmetric;
// a nonpositive pivot throws NotPositiveDefinite with the offending index.
class SPDMatrix {
 public:
  static SPDMatrix factor(const Mat& w);

  int dim() const { return static_cast<int>(l_.rows()); }
  const Mat& matrix() const { return w_; }           // the symmetrized input
  const Mat& cholesky_factor() const { return l_; }  // lower triangular L, W = L L^T

  Vec solve(const Vec& rhs) const;          // W y = rhs
  Vec forward_solve(const Vec& rhs) const;  // L z = rhs, so <rhs, W^-1 rhs> = |z|^2
  double quadratic_inverse(const Vec& x) const;  // <x, W^-1 x>

  // ||W^-1||_2 = 1 / sigma_min(L)^2; diagnostic, not on any hot path.
  double inverse_norm() const;

 private:
  SPDMatrix() = default;
  Mat w_;
  Mat l_;
};

SPDMatrix spd_factor(const Mat& w);
Vec spd_solve(const SPDMatrix& w, const Vec& rhs);

}  // namespace l2control
