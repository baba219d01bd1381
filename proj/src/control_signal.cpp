#include "l2control/control_signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "l2control/errors.hpp"

namespace l2control {

namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.empty()) throw InvalidInput("signal: needs at least one block");
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i] < 1 || dims[i] > kMaxBlockDim)
      throw InvalidInput("signal: block " + std::to_string(i) + " has invalid dimension " +
                         std::to_string(dims[i]));
}

void check_horizon(double horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon))
    throw InvalidHorizon("signal: horizon must be finite and nonnegative");
}

constexpr double kEdgeSlack = 1e-12;

}  // namespace

ControlSignal ControlSignal::zero(std::vector<int> dims, double horizon) {
  check_dims(dims);
  check_horizon(horizon);
  ControlSignal s;
  s.kind_ = Kind::Zero;
  s.horizon_ = horizon;
  s.dims_ = std::move(dims);
  return s;
}

ControlSignal ControlSignal::piecewise_constant(std::vector<double> grid,
                                                std::vector<BlockVector> values) {
  if (values.empty()) throw InvalidInput("signal: piecewise constant needs at least one piece");
  if (grid.size() != values.size() + 1)
    throw InvalidInput("signal: grid must have one more entry than the value list");
  if (grid.front() != 0.0) throw InvalidInput("signal: grid must start at 0");
  for (std::size_t j = 0; j + 1 < grid.size(); ++j)
    if (!(grid[j] < grid[j + 1]))
      throw InvalidInput("signal: grid must be strictly increasing");
  check_horizon(grid.back());

  std::vector<int> dims;
  dims.reserve(values.front().block_count());
  for (int i = 0; i < values.front().block_count(); ++i)
    dims.push_back(static_cast<int>(values.front().part(i).size()));
  for (const BlockVector& v : values) {
    if (v.block_count() != static_cast<int>(dims.size()))
      throw InvalidInput("signal: pieces disagree on block count");
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (v.part(static_cast<int>(i)).size() != dims[i])
        throw InvalidInput("signal: pieces disagree on block dimensions");
  }
  check_dims(dims);

  ControlSignal s;
  s.kind_ = Kind::PiecewiseConstant;
  s.horizon_ = grid.back();
  s.dims_ = std::move(dims);
  s.breakpoints_.assign(grid.begin() + 1, grid.end() - 1);
  s.grid_ = std::move(grid);
  s.values_ = std::make_shared<const std::vector<BlockVector>>(std::move(values));
  return s;
}

ControlSignal ControlSignal::analytic(std::vector<int> dims, double horizon, BlockFn fn,
                                      std::vector<double> breakpoints) {
  check_dims(dims);
  check_horizon(horizon);
  if (!fn) throw InvalidInput("signal: analytic signal needs a callable");
  std::sort(breakpoints.begin(), breakpoints.end());
  ControlSignal s;
  s.kind_ = Kind::Analytic;
  s.horizon_ = horizon;
  s.dims_ = std::move(dims);
  s.fn_ = std::move(fn);
  s.breakpoints_ = std::move(breakpoints);
  return s;
}

Vec ControlSignal::eval_block(int i, double t) const {
  if (i < 0 || i >= block_count())
    throw InvalidInput("signal: block index " + std::to_string(i) + " out of range");
  if (t < -kEdgeSlack || t > horizon_ + kEdgeSlack * std::max(1.0, horizon_))
    throw InvalidHorizon("signal: t = " + std::to_string(t) + " outside [0, " +
                         std::to_string(horizon_) + "]");
  switch (kind_) {
    case Kind::Zero:
      return Vec::Zero(dims_[i]);
    case Kind::PiecewiseConstant: {
      // Half-open pieces [t_j, t_{j+1}); the final instant belongs to the last.
      auto it = std::upper_bound(grid_.begin() + 1, grid_.end() - 1, t);
      const auto j = static_cast<std::size_t>(it - (grid_.begin() + 1));
      return (*values_)[j].part(i);
    }
    case Kind::Analytic:
      return fn_(i, std::clamp(t, 0.0, horizon_));
  }
  throw NumericError("signal: unreachable kind");
}

std::optional<double> ControlSignal::exact_energy() const {
  if (kind_ == Kind::Zero) return 0.0;
  if (kind_ != Kind::PiecewiseConstant) return std::nullopt;
  double sum = 0.0;
  for (std::size_t j = 0; j < values_->size(); ++j) {
    const double dt = grid_[j + 1] - grid_[j];
    double piece = 0.0;
    for (int i = 0; i < block_count(); ++i) piece += (*values_)[j].part(i).squaredNorm();
    sum += dt * piece;
  }
  return sum;
}

ControlSignal ControlSignal::scaled_sum(double a, const ControlSignal& other, double b) const {
  if (dims_ != other.dims_) throw InvalidInput("signal: sum of signals with different shapes");
  const double horizon = std::min(horizon_, other.horizon_);

  // Degenerate combinations stay structured so exact energies survive.
  if (kind_ == Kind::Zero && other.kind_ == Kind::Zero)
    return ControlSignal::zero(dims_, horizon);

  std::vector<double> breaks = breakpoints_;
  breaks.insert(breaks.end(), other.breakpoints_.begin(), other.breakpoints_.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  ControlSignal lhs = *this, rhs = other;
  return ControlSignal::analytic(
      dims_, horizon,
      [a, b, lhs, rhs](int i, double t) -> Vec {
        return a * lhs.eval_block(i, t) + b * rhs.eval_block(i, t);
      },
      std::move(breaks));
}

}  // namespace l2control
