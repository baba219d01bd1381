#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "l2control/block_system.hpp"
#include "l2control/types.hpp"

namespace l2control {

// Blockwise control/disturbance signal on [0, horizon].  Three flavors:
//   Zero               identically zero (propagation skips the integral),
//   PiecewiseConstant  values on a strictly increasing time grid,
//   Analytic           arbitrary callable per block.
// Piecewise-constant signals expose their grid as breakpoints so composite
// quadrature can split panels there and stay spectrally accurate.
class ControlSignal {
 public:
  enum class Kind { Zero, PiecewiseConstant, Analytic };

  using BlockFn = std::function<Vec(int block, double t)>;

  static ControlSignal zero(std::vector<int> dims, double horizon);
  static ControlSignal piecewise_constant(std::vector<double> grid,
                                          std::vector<BlockVector> values);
  static ControlSignal analytic(std::vector<int> dims, double horizon, BlockFn fn,
                                std::vector<double> breakpoints = {});

  Kind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  const std::vector<int>& dims() const { return dims_; }
  int block_count() const { return static_cast<int>(dims_.size()); }

  // Interior discontinuity locations (empty unless piecewise constant).
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  // t must lie in [0, horizon]; a hair of slack absorbs rounding at the end.
  Vec eval_block(int i, double t) const;

  // Piecewise-constant and zero signals know their energy in closed form.
  std::optional<double> exact_energy() const;

  // Pointwise sum a*this + b*other (same dims; horizon = min of the two).
  ControlSignal scaled_sum(double a, const ControlSignal& other, double b) const;

 private:
  ControlSignal() = default;

  Kind kind_ = Kind::Zero;
  double horizon_ = 0.0;
  std::vector<int> dims_;
  std::vector<double> breakpoints_;

  // piecewise constant: grid_ has one more entry than values_
  std::vector<double> grid_;
  std::shared_ptr<const std::vector<BlockVector>> values_;

  BlockFn fn_;
};

}  // namespace l2control
