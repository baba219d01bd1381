#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "l2control/block_matrix.hpp"
#include "l2control/errors.hpp"
#include "l2control/matrix_exp.hpp"
#include "l2control/spd.hpp"
#include "test_support.hpp"

using namespace l2control;

namespace {
double rel_err(const Mat& got, const Mat& want) {
  return (got - want).norm() / want.norm();
}
}  // namespace

TEST_CASE("expm of a diagonal matrix exponentiates the diagonal") {
  Mat a(3, 3);
  a << -1, 0, 0, 0, -2, 0, 0, 0, 0.5;
  for (double t : {0.1, 1.0, 3.0, -2.0}) {
    Mat want = Mat::Zero(3, 3);
    want(0, 0) = std::exp(-t);
    want(1, 1) = std::exp(-2 * t);
    want(2, 2) = std::exp(0.5 * t);
    CHECK(rel_err(expm(a, t), want) < 1e-14);
  }
}

TEST_CASE("expm of a Jordan cell carries the polynomial factor") {
  Mat a(2, 2);
  a << -1, 1, 0, -1;
  // e^{tA} = e^{-t} [[1, t], [0, 1]]
  const double t = 2.0;
  Mat want(2, 2);
  want << std::exp(-2.0), 2 * std::exp(-2.0), 0, std::exp(-2.0);
  CHECK(rel_err(expm(a, t), want) < 1e-14);
}

TEST_CASE("expm of a skew matrix is the rotation") {
  Mat a(2, 2);
  a << 0, 1, -1, 0;
  const double t = std::numbers::pi / 3;
  Mat want(2, 2);
  want << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  CHECK(rel_err(expm(a, t), want) < 1e-14);
  // orthogonality survives long horizons
  const Mat r = expm(a, 50.0);
  CHECK((r * r.transpose() - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("expm time scaling matches matrix scaling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat a = testsupport::random_triangular_stable(4, rng);
    const double t = 0.3 + 0.2 * trial;
    CHECK(rel_err(expm(a, t), expm(Mat(t * a))) < 1e-13);
  }
}

TEST_CASE("expm inverse identity holds at short horizons") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat a = testsupport::random_normal_stable(2 + trial % 7, rng);
    const double t = 0.1 + 0.04 * trial;
    const Mat prod = expm(a, t) * expm(a, -t);
    CHECK((prod - Mat::Identity(a.rows(), a.cols())).norm() < 5e-13);
  }
}

TEST_CASE("expm semigroup property on normal blocks, same-sign horizons") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> horizon(0.0, 10.0);
  std::uniform_int_distribution<int> dim(2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat a = testsupport::random_normal_stable(dim(rng), rng);
    double t = horizon(rng), s = horizon(rng);
    if (trial % 2 == 1) {
      t = -t;
      s = -s;
    }
    const Mat lhs = expm(a, t) * expm(a, s);
    const Mat rhs = expm(a, t + s);
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-12);
  }
}

TEST_CASE("expm semigroup on mildly non-normal blocks at a looser tolerance") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> horizon(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat a = testsupport::random_triangular_stable(2 + trial % 5, rng);
    const double t = horizon(rng), s = horizon(rng);
    const Mat lhs = expm(a, t) * expm(a, s);
    const Mat rhs = expm(a, t + s);
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-10);
  }
}

TEST_CASE("expm rejects bad input") {
  CHECK_THROWS_AS(expm(Mat(Mat::Zero(2, 3))), InvalidInput);
  CHECK_THROWS_AS(expm(Mat()), InvalidInput);
  Mat bad(2, 2);
  bad << 1, std::nan(""), 0, 1;
  CHECK_THROWS_AS(expm(bad), InvalidInput);
  CHECK_THROWS_AS(expm(bad, std::nan("")), InvalidInput);
}

TEST_CASE("segment basis reproduces per-node exponentials") {
  std::mt19937_64 rng(15);
  const Mat a = testsupport::random_triangular_stable(3, rng);
  UniformSegment seg;
  seg.start = 0.4;
  seg.panel_width = 0.25;
  seg.panels = 3;
  seg.offsets = {0.05, 0.2};
  seg.weights = {0.1, 0.1};
  const SegmentExpBasis basis = make_negative_exp_basis(a, seg);
  Mat walker = basis.segment_base;
  for (int p = 0; p < seg.panels; ++p) {
    for (std::size_t j = 0; j < seg.offsets.size(); ++j) {
      const double s = seg.start + p * seg.panel_width + seg.offsets[j];
      const Mat direct = expm(a, -s);
      const Mat stepped = basis.node_offset[j] * walker;
      CHECK((stepped - direct).norm() / direct.norm() < 1e-13);
    }
    walker = basis.panel_step * walker;
  }
}

TEST_CASE("block matrix rejects malformed input") {
  CHECK_THROWS_AS(BlockMatrix{Mat()}, InvalidInput);
  CHECK_THROWS_AS(BlockMatrix(Mat(Mat::Zero(2, 3))), InvalidInput);
  CHECK_THROWS_AS(BlockMatrix(Mat(Mat::Identity(kMaxBlockDim + 1, kMaxBlockDim + 1))),
                  InvalidInput);
  Mat bad(2, 2);
  bad << 1, 0, 0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(BlockMatrix{bad}, InvalidInput);
}

TEST_CASE("spectral abscissa closed forms in low dimension") {
  Mat scalar(1, 1);
  scalar << -2.5;
  CHECK(BlockMatrix(scalar).spectral_abscissa() == doctest::Approx(-2.5).epsilon(1e-15));

  Mat real2(2, 2);
  real2 << -1, 0, 0, -2;
  const BlockMatrix r(real2);
  CHECK(r.spectral_abscissa() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(r.min_real_part() == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(r.stable());

  Mat pair2(2, 2);
  pair2 << -1, 5, -5, -1;  // eigenvalues -1 +- 5i
  const BlockMatrix c(pair2);
  CHECK(c.spectral_abscissa() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(c.min_real_part() == doctest::Approx(-1.0).epsilon(1e-14));

  Mat marginal(2, 2);
  marginal << 0, 1, -1, 0;
  CHECK(BlockMatrix(marginal).spectral_abscissa() == 0.0);
  CHECK_FALSE(BlockMatrix(marginal).stable());
}

TEST_CASE("spectral abscissa matches the triangular construction in higher dimension") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 3 + trial % 6;
    std::uniform_real_distribution<double> re(-3.0, -0.3);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
    double max_re = -1e300, min_re = 1e300;
    for (int i = 0; i < d; ++i) {
      t(i, i) = re(rng);
      max_re = std::max(max_re, t(i, i));
      min_re = std::min(min_re, t(i, i));
    }
    std::uniform_real_distribution<double> off(-0.5, 0.5);
    for (int r = 0; r < d; ++r)
      for (int c = r + 1; c < d; ++c) t(r, c) = off(rng);
    const Eigen::MatrixXd q = testsupport::random_orthogonal(d, rng);
    const BlockMatrix b{Mat(q * t * q.transpose())};
    CHECK(b.spectral_abscissa() == doctest::Approx(max_re).epsilon(1e-10));
    CHECK(b.min_real_part() == doctest::Approx(min_re).epsilon(1e-10));
  }
}

TEST_CASE("free helpers mirror the members") {
  Mat a(2, 2);
  a << -1, 0, 0, -3;
  const BlockMatrix b(a);
  CHECK(spectral_abscissa(b) == b.spectral_abscissa());
  CHECK(rel_err(expm(b, 2.0), expm(a, 2.0)) == 0.0);
}

TEST_CASE("spd factorization solves and measures") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 7;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = gauss(rng);
    const Mat w = g * g.transpose() + 0.1 * Mat::Identity(d, d);
    const SPDMatrix spd = SPDMatrix::factor(w);

    const Vec x = testsupport::random_unit(d, rng);
    const Vec y = spd.solve(x);
    CHECK((w * y - x).norm() < 1e-10 * x.norm() * spd.inverse_norm() * w.norm());
    CHECK(spd.quadratic_inverse(x) == doctest::Approx(x.dot(y)).epsilon(1e-10));

    // ||W^-1|| against a dense eigensolve
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(w)};
    CHECK(spd.inverse_norm() ==
          doctest::Approx(1.0 / es.eigenvalues().minCoeff()).epsilon(1e-9));
  }
}

TEST_CASE("spd factorization rejects what it must") {
  Mat asym(2, 2);
  asym << 1, 0.5, -0.5, 1;
  CHECK_THROWS_AS(SPDMatrix::factor(asym), InvalidInput);

  Mat indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_WITH_AS(SPDMatrix::factor(indef),
                       doctest::Contains("pivot"), NotPositiveDefinite);

  Mat nan2(2, 2);
  nan2 << 1, 0, 0, std::nan("");
  CHECK_THROWS_AS(SPDMatrix::factor(nan2), NotPositiveDefinite);
}

TEST_CASE("spd free functions forward to the class") {
  Mat w(2, 2);
  w << 2, 1, 1, 2;
  const SPDMatrix spd = spd_factor(w);
  Vec rhs(2);
  rhs << 1, 0;
  const Vec y = spd_solve(spd, rhs);
  // inverse of [[2,1],[1,2]] is [[2,-1],[-1,2]]/3
  CHECK(y(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(y(1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  Vec bad(3);
  bad << 1, 2, 3;
  CHECK_THROWS_AS(spd_solve(spd, bad), InvalidInput);
}
