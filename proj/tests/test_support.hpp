#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "l2control/block_system.hpp"
#include "l2control/types.hpp"

// Hand-rolled generators for property tests.  Seeded mt19937_64 everywhere so
// every failure reproduces from the seed in the test name.
namespace testsupport {

inline Eigen::MatrixXd random_orthogonal(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = gauss(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

// Rotated real normal form built from 1x1 cells [a] and 2x2 spin cells
// [[a, b], [-b, a]].  Normal matrices: perfectly conditioned eigenbasis, so
// exponential identities hold near machine precision at long horizons.
inline l2control::Mat random_normal_stable(int d, std::mt19937_64& rng, double re_lo = -2.0,
                                           double re_hi = -0.5, double spin_max = 2.0) {
  std::uniform_real_distribution<double> re(re_lo, re_hi);
  std::uniform_real_distribution<double> im(-spin_max, spin_max);
  std::bernoulli_distribution pair(0.5);

  Eigen::MatrixXd cells = Eigen::MatrixXd::Zero(d, d);
  int k = 0;
  while (k < d) {
    if (d - k >= 2 && pair(rng)) {
      const double a = re(rng), b = im(rng);
      cells(k, k) = a;
      cells(k + 1, k + 1) = a;
      cells(k, k + 1) = b;
      cells(k + 1, k) = -b;
      k += 2;
    } else {
      cells(k, k) = re(rng);
      k += 1;
    }
  }
  const Eigen::MatrixXd q = random_orthogonal(d, rng);
  return l2control::Mat(q * cells * q.transpose());
}

// Mildly non-normal: rotated upper triangular with bounded coupling.  The
// spectral abscissa is the largest diagonal entry, known by construction.
inline l2control::Mat random_triangular_stable(int d, std::mt19937_64& rng, double re_lo = -3.0,
                                               double re_hi = -0.3, double coupling = 0.5) {
  std::uniform_real_distribution<double> re(re_lo, re_hi);
  std::uniform_real_distribution<double> off(-coupling, coupling);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) t(i, i) = re(rng);
  for (int r = 0; r < d; ++r)
    for (int c = r + 1; c < d; ++c) t(r, c) = off(rng);
  const Eigen::MatrixXd q = random_orthogonal(d, rng);
  return l2control::Mat(q * t * q.transpose());
}

inline l2control::Vec random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  l2control::Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = gauss(rng);
  const double n = v.norm();
  return n > 0 ? l2control::Vec(v / n) : l2control::Vec(l2control::Vec::Unit(d, 0));
}

inline l2control::BlockSystem random_system(int blocks, int dim_lo, int dim_hi,
                                            std::mt19937_64& rng, bool normal_cells = false) {
  std::uniform_int_distribution<int> dim(dim_lo, dim_hi);
  std::vector<l2control::BlockMatrix> parts;
  parts.reserve(blocks);
  for (int i = 0; i < blocks; ++i) {
    const int d = dim(rng);
    parts.emplace_back(normal_cells ? random_normal_stable(d, rng)
                                    : random_triangular_stable(d, rng));
  }
  return l2control::BlockSystem(std::move(parts));
}

inline l2control::BlockVector random_state(const l2control::BlockSystem& system,
                                           std::mt19937_64& rng, double tail = 0.0) {
  std::vector<l2control::Vec> parts;
  parts.reserve(system.block_count());
  for (int i = 0; i < system.block_count(); ++i)
    parts.push_back(random_unit(system.dims()[i], rng));
  return l2control::BlockVector(std::move(parts), tail);
}

}  // namespace testsupport
