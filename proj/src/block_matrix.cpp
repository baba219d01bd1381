#include "l2control/block_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "l2control/errors.hpp"
#include "l2control/matrix_exp.hpp"

namespace l2control {

namespace {

// Real-part extremes of the spectrum.  Dimensions 1 and 2 have closed forms
// from the characteristic polynomial; above that the Schur-based solver takes
// over (its backward error is a small multiple of machine epsilon times
// ||A||, well inside the 1e-10 contract for entries of modest size).
std::pair<double, double> real_part_range(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return {a(0, 0), a(0, 0)};
  if (n == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double disc = (a(0, 0) - a(1, 1)) * (a(0, 0) - a(1, 1)) + 4.0 * a(0, 1) * a(1, 0);
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      return {(tr - root) / 2.0, (tr + root) / 2.0};
    }
    return {tr / 2.0, tr / 2.0};  // complex pair
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(a), false);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("spectral abscissa: eigenvalue iteration failed at dim " +
                           std::to_string(n));
  const auto re = solver.eigenvalues().real();
  return {re.minCoeff(), re.maxCoeff()};
}

}  // namespace

BlockMatrix::BlockMatrix(Mat entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n == 0 || n != entries_.cols())
    throw InvalidInput("block matrix: must be square and nonempty");
  if (n > kMaxBlockDim)
    throw InvalidInput("block matrix: dimension " + std::to_string(n) + " exceeds the cap " +
                       std::to_string(kMaxBlockDim));
  if (!entries_.allFinite()) throw InvalidInput("block matrix: entries must be finite");
  const auto [lo, hi] = real_part_range(entries_);
  min_re_ = lo;
  max_re_ = hi;
}

double spectral_abscissa(const BlockMatrix& a) { return a.spectral_abscissa(); }

Mat expm(const BlockMatrix& a, double t) { return expm(a.entries(), t); }

}  // namespace l2control
