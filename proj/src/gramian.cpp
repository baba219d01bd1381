#include "l2control/gramian.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "l2control/errors.hpp"
#include "l2control/matrix_exp.hpp"

namespace l2control {

GramianBlock::GramianBlock(Mat a, double tau, SPDMatrix forward)
    : a_(std::move(a)), tau_(tau), forward_(std::move(forward)) {
  if (!(tau_ > 0.0)) throw InvalidHorizon("gramian: tau must be positive");
  if (a_.rows() != forward_.dim() || a_.cols() != forward_.dim())
    throw InvalidInput("gramian: block shape mismatch");
  fwd_map_ = expm(a_, tau_);
}

Mat GramianBlock::matrix() const {
  const Mat d = expm(a_, -tau_);
  Mat w = d * forward_.matrix() * d.transpose();
  return (w + Mat(w.transpose())) / 2.0;
}

double GramianBlock::quadratic_inverse(const Vec& x) const {
  return forward_.quadratic_inverse(fwd_map_ * x);
}

Vec GramianBlock::solve(const Vec& x) const {
  return fwd_map_.transpose() * forward_.solve(fwd_map_ * x);
}

Vec GramianBlock::core_solve(const Vec& x) const { return forward_.solve(fwd_map_ * x); }

double GramianBlock::inverse_norm() const {
  const Eigen::MatrixXd f = Eigen::MatrixXd(expm(a_, -tau_) * forward_.cholesky_factor());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  const double smin = svd.singularValues().minCoeff();
  return 1.0 / (smin * smin);
}

BlockGramian::BlockGramian(double tau, std::vector<GramianBlock> blocks)
    : tau_(tau), blocks_(std::move(blocks)) {
  if (!(tau_ > 0.0)) throw InvalidHorizon("gramian: tau must be positive");
  if (blocks_.empty()) throw InvalidInput("gramian: needs at least one block");
}

namespace {

// Sum_k w_k e^{c s_k A} e^{c s_k A^T} over the composite grid on [0, tau].
// Node exponentials advance by semigroup stepping: one small product per
// node plus one per panel, no per-node expm.
Mat quadrature_gramian(const Mat& a, double c, double tau, const QuadratureSpec& quad) {
  const CompositeGrid grid = make_grid(quad, tau);
  const Eigen::Index d = a.rows();
  const Mat ca = c * a;
  Mat w = Mat::Zero(d, d);
  Mat e(d, d);
  for (const UniformSegment& seg : grid.segments) {
    const SegmentExpBasis basis = make_negative_exp_basis(-ca, seg);
    Mat s_p = basis.segment_base;
    for (int p = 0; p < seg.panels; ++p) {
      for (std::size_t j = 0; j < seg.offsets.size(); ++j) {
        e.noalias() = basis.node_offset[j] * s_p;
        w.noalias() += seg.weights[j] * (e * e.transpose());
      }
      if (p + 1 < seg.panels) s_p = (s_p * basis.panel_step).eval();
    }
  }
  return w;
}

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw InvalidHorizon("gramian: tau must be positive and finite");
}

}  // namespace

SPDMatrix gramian_block(const BlockMatrix& a, double tau, const QuadratureSpec& quad) {
  check_tau(tau);
  return SPDMatrix::factor(quadrature_gramian(a.entries(), -1.0, tau, quad));
}

Mat gramian_block_augmented(const BlockMatrix& a, double tau) {
  check_tau(tau);
  const Eigen::Index d = a.entries().rows();
  Mat h = Mat::Zero(2 * d, 2 * d);
  h.topLeftCorner(d, d) = -a.entries();
  h.topRightCorner(d, d) = Mat::Identity(d, d);
  h.bottomRightCorner(d, d) = a.entries().transpose();
  const Mat m = expm(h, tau);
  return m.topRightCorner(d, d) * m.topLeftCorner(d, d).transpose();
}

BlockGramian assemble_gramian(const BlockSystem& system, double tau, const QuadratureSpec& quad,
                              Exec exec) {
  check_tau(tau);

  const int n = system.block_count();
  std::vector<Mat> raw(n);
  for_each_block(exec, n,
                 [&](int i) { raw[i] = quadrature_gramian(system.block(i).entries(), 1.0, tau, quad); });

  // Factor serially so a failure always reports the lowest offending block.
  std::vector<GramianBlock> blocks;
  blocks.reserve(n);
  for (int i = 0; i < n; ++i) {
    try {
      blocks.emplace_back(system.block(i).entries(), tau, SPDMatrix::factor(raw[i]));
    } catch (const NotPositiveDefinite& e) {
      throw NotPositiveDefinite("gramian: block " + std::to_string(i) + " at tau " +
                                std::to_string(tau) + ": " + e.what());
    }
  }
  return BlockGramian(tau, std::move(blocks));
}

double gramian_cost(const BlockGramian& gramian, const BlockVector& x0) {
  if (x0.block_count() != gramian.block_count())
    throw InvalidInput("gramian cost: block count mismatch");
  double sum = 0.0;
  for (int i = 0; i < gramian.block_count(); ++i) {
    if (x0.part(i).size() != gramian.block(i).dim())
      throw InvalidInput("gramian cost: block " + std::to_string(i) + " dimension mismatch");
    sum += gramian.block(i).quadratic_inverse(x0.part(i));
  }
  return sum;
}

namespace {

// Condition number of the eigenvector matrix, the C in the decay bound.
double eigenbasis_conditioning(const Mat& a) {
  if (a.rows() == 1) return 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(a), true};
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("gramian diagnostic: eigenvalue iteration failed");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(solver.eigenvectors());
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return svd.singularValues().maxCoeff() / smin;
}

}  // namespace

WInvBoundReport w_inv_bound_check(const BlockSystem& system, const BlockGramian& gramian) {
  if (system.block_count() != gramian.block_count())
    throw InvalidInput("gramian diagnostic: block count mismatch");

  WInvBoundReport report;
  report.rows.reserve(system.block_count());
  for (int i = 0; i < system.block_count(); ++i) {
    WInvBoundRow row;
    row.block = i;
    // sigma_min(e^{-sA}) is governed by the slowest-decaying mode, so the
    // valid rate here is -abscissa, not the fastest one
    row.beta = -system.block(i).spectral_abscissa();
    row.conditioning = eigenbasis_conditioning(system.block(i).entries());
    row.measured = gramian.block(i).inverse_norm();
    row.bound = 2.0 * row.conditioning * row.conditioning * row.beta /
                std::expm1(2.0 * row.beta * gramian.tau());
    row.within = row.measured <= row.bound * (1.0 + 1e-9);
    report.rows.push_back(row);
    report.all_within = report.all_within && row.within;
  }
  return report;
}

}  // namespace l2control
