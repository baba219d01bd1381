#pragma once

#include <memory>

#include "l2control/block_system.hpp"
#include "l2control/control_signal.hpp"
#include "l2control/gramian.hpp"
#include "l2control/parallel.hpp"
#include "l2control/quadrature.hpp"

namespace l2control {

// Minimum-energy control steering x0 to the origin by time tau:
//   u0(t) = -e^{-tA^T} W^{-1}(tau) x0   blockwise,
// with energy <x0, W^{-1}(tau) x0>.  Internally evaluated in the equivalent
// form u0(t) = -e^{(tau-t)A^T} c, c = Wf^{-1} e^{tau A} x0, whose factors all
// decay; the textbook form multiplies a growing exponential into a vector
// that was rounded, which loses everything at large tau.
//
// Cheap to copy (shared immutable state).  Signal evaluations are memoized
// per (block, t) because quadrature passes revisit identical nodes.
class NullControl {
 public:
  double horizon() const;
  bool degenerate() const;  // tau == 0, the x0 = 0 convention

  const BlockGramian& gramian() const;         // throws InvalidHorizon if degenerate
  const BlockVector& steering_vector() const;  // y = W^{-1}(tau) x0
  double energy() const;                       // <x0, y> = gramian_cost

  Vec eval_block(int i, double t) const;  // u0_i(t)
  ControlSignal signal() const;           // analytic wrapper over [0, tau]

 private:
  NullControl() = default;
  friend NullControl null_control(const BlockSystem&, const BlockVector&, double,
                                  const QuadratureSpec&, Exec);
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// tau > 0 required, except tau = 0 is accepted for retained x0 = 0 (the
// degenerate optimal-time convention) and yields the identically zero control.
NullControl null_control(const BlockSystem& system, const BlockVector& x0, double tau,
                         const QuadratureSpec& quad, Exec exec = Exec::Parallel);

// The unique vartheta with <x0, W^{-1}(vartheta) x0> = theta^2.  The cost is
// strictly decreasing and blows up as tau -> 0, so a geometric bracket always
// exists; inside the bracket a secant step on log(cost) alternates with
// bisection.  Returns 0 for retained x0 = 0.  Convergence: |cost - theta^2|
// <= tol * theta^2.
double optimal_time(const BlockSystem& system, const BlockVector& x0, double theta,
                    const QuadratureSpec& quad, double tol = 1e-10, Exec exec = Exec::Parallel);

// Minimum-energy certificate at a test horizon strictly inside (0, vartheta):
// any admissible-energy control needs at least j_min to reach the origin by
// tau_test, and j_min > theta^2 certifies that no admissible control can.
struct OptimalityCertificate {
  double theta = 0.0;
  double vartheta = 0.0;
  double tau_test = 0.0;
  double j_min = 0.0;    // gramian_cost at tau_test
  double margin = 0.0;   // j_min - theta^2
  bool inadmissible = false;
};

OptimalityCertificate certify_optimality(const BlockSystem& system, const BlockVector& x0,
                                         double theta, double tau_test,
                                         const QuadratureSpec& quad, double tol = 1e-10,
                                         Exec exec = Exec::Parallel);

}  // namespace l2control
