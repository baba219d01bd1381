#include "l2control/null_control.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "l2control/errors.hpp"
#include "l2control/matrix_exp.hpp"

namespace l2control {

namespace {

struct NodeKey {
  int block;
  std::uint64_t t_bits;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const {
    std::uint64_t h = k.t_bits + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k.block + 1);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

struct NullControl::Impl {
  std::vector<Mat> a;
  std::vector<int> dims;
  double tau = 0.0;
  std::optional<BlockGramian> gramian;
  BlockVector y;     // W^{-1}(tau) x0
  BlockVector core;  // Wf^{-1} e^{tau A} x0, the stable evaluation vector
  double energy = 0.0;

  mutable std::mutex memo_mu;
  mutable std::unordered_map<NodeKey, Vec, NodeKeyHash> memo;

  Impl(BlockVector y0, BlockVector core0) : y(std::move(y0)), core(std::move(core0)) {}
};

double NullControl::horizon() const { return impl_->tau; }

bool NullControl::degenerate() const { return !impl_->gramian.has_value(); }

const BlockGramian& NullControl::gramian() const {
  if (degenerate()) throw InvalidHorizon("null control: no gramian at tau = 0");
  return *impl_->gramian;
}

const BlockVector& NullControl::steering_vector() const { return impl_->y; }

double NullControl::energy() const { return impl_->energy; }

Vec NullControl::eval_block(int i, double t) const {
  const Impl& im = *impl_;
  if (i < 0 || i >= static_cast<int>(im.dims.size()))
    throw InvalidInput("null control: block index out of range");
  if (t < -1e-12 || t > im.tau + 1e-12 * std::max(1.0, im.tau))
    throw InvalidHorizon("null control: t = " + std::to_string(t) + " outside [0, " +
                         std::to_string(im.tau) + "]");
  if (degenerate()) return Vec::Zero(im.dims[i]);

  const NodeKey key{i, std::bit_cast<std::uint64_t>(t)};
  {
    std::lock_guard<std::mutex> lock(im.memo_mu);
    auto it = im.memo.find(key);
    if (it != im.memo.end()) return it->second;
  }
  const double remaining = std::clamp(im.tau - t, 0.0, im.tau);
  Vec u = -(expm(im.a[i], remaining).transpose() * im.core.part(i));
  {
    std::lock_guard<std::mutex> lock(im.memo_mu);
    im.memo.emplace(key, u);
  }
  return u;
}

ControlSignal NullControl::signal() const {
  if (degenerate()) return ControlSignal::zero(impl_->dims, impl_->tau);
  NullControl self = *this;
  return ControlSignal::analytic(impl_->dims, impl_->tau,
                                 [self](int i, double t) { return self.eval_block(i, t); });
}

NullControl null_control(const BlockSystem& system, const BlockVector& x0, double tau,
                         const QuadratureSpec& quad, Exec exec) {
  check_same_shape(system, x0);
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw InvalidHorizon("null control: tau must be finite and nonnegative");

  NullControl out;
  if (tau == 0.0) {
    if (x0.retained_norm() != 0.0)
      throw InvalidHorizon("null control: tau = 0 is only defined for x0 = 0");
    auto impl = std::make_shared<NullControl::Impl>(BlockVector::zeros(system),
                                                    BlockVector::zeros(system));
    impl->dims = system.dims();
    out.impl_ = std::move(impl);
    return out;
  }

  BlockGramian gramian = assemble_gramian(system, tau, quad, exec);

  const int n = system.block_count();
  std::vector<Vec> y(n), core(n);
  for_each_block(exec, n, [&](int i) {
    core[i] = gramian.block(i).core_solve(x0.part(i));
    y[i] = gramian.block(i).solve(x0.part(i));
  });

  const double energy = gramian_cost(gramian, x0);

  auto impl = std::make_shared<NullControl::Impl>(BlockVector(std::move(y)),
                                                  BlockVector(std::move(core)));
  impl->a.reserve(n);
  for (int i = 0; i < n; ++i) impl->a.push_back(system.block(i).entries());
  impl->dims = system.dims();
  impl->tau = tau;
  impl->gramian = std::move(gramian);
  impl->energy = energy;
  out.impl_ = std::move(impl);
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double optimal_time(const BlockSystem& system, const BlockVector& x0, double theta,
                    const QuadratureSpec& quad, double tol, Exec exec) {
  check_same_shape(system, x0);
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw InvalidInput("optimal time: theta must be positive and finite");
  if (!(tol > 0.0)) throw InvalidInput("optimal time: tolerance must be positive");
  if (x0.retained_norm() == 0.0) return 0.0;

  const double target = theta * theta;
  const auto cost = [&](double tau) {
    return gramian_cost(assemble_gramian(system, tau, quad, exec), x0);
  };
  const auto converged = [&](double c) { return std::abs(c - target) <= tol * target; };

  constexpr double kTau0 = 1e-3;
  constexpr double kTauMax = 1e6;
  constexpr int kMaxIter = 200;

  // Bracket: cost blows up as tau -> 0 and decays to 0, so walk geometrically
  // until cost(lo) > theta^2 > cost(hi).
  double lo = kTau0;
  double c_lo = cost(lo);
  if (converged(c_lo)) return lo;
  double hi = 0.0, c_hi = 0.0;
  if (c_lo > target) {
    hi = 2.0 * lo;
    c_hi = cost(hi);
    while (c_hi > target) {
      if (converged(c_hi)) return hi;
      lo = hi;
      c_lo = c_hi;
      hi *= 2.0;
      if (hi > kTauMax)
        throw ConvergenceError("optimal time: no bracket below tau = " + fmt(kTauMax) +
                               " (cost " + fmt(c_hi) + " at tau " + fmt(hi / 2.0) +
                               " still above theta^2 = " + fmt(target) + ")");
      c_hi = cost(hi);
    }
  } else {
    hi = lo;
    c_hi = c_lo;
    while (c_lo < target) {
      if (converged(c_lo)) return lo;
      hi = lo;
      c_hi = c_lo;
      lo /= 2.0;
      if (lo < 1e-300)
        throw ConvergenceError("optimal time: no bracket above tau = 1e-300 (cost " +
                               fmt(c_lo) + " still below theta^2 = " + fmt(target) + ")");
      c_lo = cost(lo);
    }
  }
  if (converged(c_hi)) return hi;

  // Safeguarded refinement: secant on log(cost) (near-linear for these
  // costs), interleaved with bisection so the bracket provably shrinks.
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double f_lo = std::log(c_lo) - std::log(target);
    const double f_hi = std::log(c_hi) - std::log(target);
    double mid = lo + f_lo * (hi - lo) / (f_lo - f_hi);
    const double width = hi - lo;
    if (iter % 2 == 1 || !(mid > lo + 1e-3 * width && mid < hi - 1e-3 * width))
      mid = lo + width / 2.0;
    const double c_mid = cost(mid);
    if (converged(c_mid)) return mid;
    if (c_mid > target) {
      lo = mid;
      c_lo = c_mid;
    } else {
      hi = mid;
      c_hi = c_mid;
    }
    if (hi - lo <= 1e-15 * hi)
      throw ConvergenceError("optimal time: bracket [" + fmt(lo) + ", " + fmt(hi) +
                             "] collapsed with cost (" + fmt(c_lo) + ", " + fmt(c_hi) +
                             ") around theta^2 = " + fmt(target) +
                             "; residual exceeds tolerance " + fmt(tol));
  }
  throw ConvergenceError("optimal time: no convergence after " + std::to_string(kMaxIter) +
                         " iterations; bracket [" + fmt(lo) + ", " + fmt(hi) + "], cost (" +
                         fmt(c_lo) + ", " + fmt(c_hi) + "), theta^2 = " + fmt(target));
}

OptimalityCertificate certify_optimality(const BlockSystem& system, const BlockVector& x0,
                                         double theta, double tau_test,
                                         const QuadratureSpec& quad, double tol, Exec exec) {
  OptimalityCertificate cert;
  cert.theta = theta;
  cert.vartheta = optimal_time(system, x0, theta, quad, tol, exec);
  if (!(tau_test > 0.0) || !std::isfinite(tau_test))
    throw InvalidTestHorizon("certificate: tau_test must be positive and finite");
  if (tau_test >= cert.vartheta)
    throw InvalidTestHorizon("certificate: tau_test = " + fmt(tau_test) +
                             " is not strictly below the optimal time " + fmt(cert.vartheta));
  cert.tau_test = tau_test;
  cert.j_min = gramian_cost(assemble_gramian(system, tau_test, quad, exec), x0);
  cert.margin = cert.j_min - theta * theta;
  cert.inadmissible = cert.margin > 0.0;
  return cert;
}

}  // namespace l2control
