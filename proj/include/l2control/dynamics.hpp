#pragma once

#include <span>
#include <utility>
#include <vector>

#include "l2control/block_system.hpp"
#include "l2control/control_signal.hpp"
#include "l2control/parallel.hpp"
#include "l2control/quadrature.hpp"

namespace l2control {

// State at time t under combined input w (control minus disturbance), by
// variation of constants per block:
//   x_i(t) = e^{tA_i} (x_i(0) + integral_0^t e^{-sA_i} w_i(s) ds).
// The integral uses the composite rule split at the signal's breakpoints.
// The tail bound decays by exp(-tail_decay_rate * t); the default rate 0
// keeps the bound conservative when nothing is known about the cut modes.
BlockVector propagate(const BlockSystem& system, const BlockVector& x0, const ControlSignal& w,
                      double t, const QuadratureSpec& quad, double tail_decay_rate = 0.0,
                      Exec exec = Exec::Parallel);

// (t, total norm) samples of the uncontrolled trajectory.
std::vector<std::pair<double, double>> free_decay(const BlockSystem& system,
                                                  const BlockVector& x0,
                                                  std::span<const double> times,
                                                  double tail_decay_rate = 0.0,
                                                  Exec exec = Exec::Parallel);

// Squared L2 norm of the signal over its horizon.  Exact for zero and
// piecewise-constant signals, quadrature otherwise.
double l2_energy(const ControlSignal& w, const QuadratureSpec& quad, Exec exec = Exec::Parallel);

// Energy within bound^2, up to 1e-9 absolute slack for quadrature rounding.
bool is_admissible(const ControlSignal& w, double bound, const QuadratureSpec& quad,
                   Exec exec = Exec::Parallel);

}  // namespace l2control
