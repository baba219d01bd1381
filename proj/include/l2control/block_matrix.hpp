#pragma once

#include "l2control/types.hpp"

namespace l2control {

// One diagonal block of the infinite system matrix.  Immutable; the spectral
// extremes are computed once at construction (validation wants them anyway).
class BlockMatrix {
 public:
  explicit BlockMatrix(Mat entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Mat& entries() const { return entries_; }

  // max over eigenvalues of Re(lambda); negative iff the block is stable.
  double spectral_abscissa() const { return max_re_; }
  // min over eigenvalues of Re(lambda); -min is the fastest decay rate beta.
  double min_real_part() const { return min_re_; }
  bool stable() const { return max_re_ < 0.0; }

 private:
  Mat entries_;
  double max_re_;
  double min_re_;
};

double spectral_abscissa(const BlockMatrix& a);
Mat expm(const BlockMatrix& a, double t = 1.0);

}  // namespace l2control
