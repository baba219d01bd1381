#include "l2control/block_system.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "l2control/errors.hpp"

namespace l2control {

BlockSystem::BlockSystem(std::vector<BlockMatrix> blocks, BlockSystemOptions options)
    : blocks_(std::move(blocks)), options_(options) {
  if (blocks_.empty()) throw InvalidInput("system: needs at least one block");
  if (options_.d_max < 1 || options_.d_max > kMaxBlockDim)
    throw InvalidInput("system: d_max must be in [1, " + std::to_string(kMaxBlockDim) + "]");

  const int dim_min = options_.allow_dim1 ? 1 : 2;
  dims_.reserve(blocks_.size());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const BlockMatrix& b = blocks_[i];
    if (b.dim() < dim_min || b.dim() > options_.d_max)
      throw InvalidInput("system: block " + std::to_string(i) + " has dimension " +
                         std::to_string(b.dim()) + ", outside [" + std::to_string(dim_min) +
                         ", " + std::to_string(options_.d_max) + "]");
    if (!b.stable())
      throw InvalidInput("system: block " + std::to_string(i) + " is not stable (abscissa " +
                         std::to_string(b.spectral_abscissa()) + " >= 0)");
    dims_.push_back(b.dim());
    worst = std::max(worst, b.spectral_abscissa());
  }
  min_decay_rate_ = -worst;
}

BlockVector::BlockVector(std::vector<Vec> parts, double tail_bound)
    : parts_(std::move(parts)), tail_bound_(tail_bound) {
  if (parts_.empty()) throw InvalidInput("state: needs at least one block");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].size() == 0)
      throw InvalidInput("state: block " + std::to_string(i) + " is empty");
    if (!parts_[i].allFinite())
      throw InvalidInput("state: block " + std::to_string(i) + " has nonfinite entries");
  }
  set_tail_bound(tail_bound);
}

BlockVector BlockVector::zeros(const BlockSystem& system) {
  std::vector<Vec> parts;
  parts.reserve(system.block_count());
  for (int d : system.dims()) parts.push_back(Vec::Zero(d));
  return BlockVector(std::move(parts), 0.0);
}

void BlockVector::set_tail_bound(double b) {
  if (!(b >= 0.0) || !std::isfinite(b))
    throw InvalidInput("state: tail bound must be finite and nonnegative");
  tail_bound_ = b;
}

double BlockVector::retained_norm() const {
  double sum = 0.0;
  for (const Vec& p : parts_) sum += p.squaredNorm();
  return std::sqrt(sum);
}

double BlockVector::total_norm() const {
  const double r = retained_norm();
  return std::sqrt(r * r + tail_bound_ * tail_bound_);
}

void check_same_shape(const BlockSystem& system, const BlockVector& x) {
  if (x.block_count() != system.block_count())
    throw InvalidInput("shape: state has " + std::to_string(x.block_count()) +
                       " blocks, system has " + std::to_string(system.block_count()));
  for (int i = 0; i < system.block_count(); ++i)
    if (x.part(i).size() != system.dims()[i])
      throw InvalidInput("shape: block " + std::to_string(i) + " has dimension " +
                         std::to_string(x.part(i).size()) + ", system expects " +
                         std::to_string(system.dims()[i]));
}

}  // namespace l2control
