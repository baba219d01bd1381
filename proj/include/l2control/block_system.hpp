#pragma once

#include <vector>

#include "l2control/block_matrix.hpp"
#include "l2control/types.hpp"

namespace l2control {

struct BlockSystemOptions {
  int d_max = kMaxBlockDim;
  // Scalar blocks are handy as oracles but outside the usual 2 <= dim regime;
  // they are opt-in everywhere.
  bool allow_dim1 = false;
};

// Finite truncation of the block-diagonal system: N independent stable blocks
// plus a scalar bound on whatever was cut off.  Construction validates shape,
// dimension range and per-block stability; instances are immutable.
class BlockSystem {
 public:
  explicit BlockSystem(std::vector<BlockMatrix> blocks, BlockSystemOptions options = {});

  int block_count() const { return static_cast<int>(blocks_.size()); }
  const BlockMatrix& block(int i) const { return blocks_[i]; }
  const std::vector<BlockMatrix>& blocks() const { return blocks_; }
  const std::vector<int>& dims() const { return dims_; }
  const BlockSystemOptions& options() const { return options_; }

  // alpha_min = -max_i abscissa_i > 0; every mode decays at least this fast.
  double min_decay_rate() const { return min_decay_rate_; }

 private:
  std::vector<BlockMatrix> blocks_;
  std::vector<int> dims_;
  BlockSystemOptions options_;
  double min_decay_rate_;
};

// Truncated state: one coefficient vector per retained block plus the l2 norm
// bound carried for the discarded tail.
class BlockVector {
 public:
  explicit BlockVector(std::vector<Vec> parts, double tail_bound = 0.0);

  static BlockVector zeros(const BlockSystem& system);

  int block_count() const { return static_cast<int>(parts_.size()); }
  const Vec& part(int i) const { return parts_[i]; }
  Vec& part(int i) { return parts_[i]; }
  const std::vector<Vec>& parts() const { return parts_; }
  double tail_bound() const { return tail_bound_; }
  void set_tail_bound(double b);

  double retained_norm() const;  // over stored blocks only, ascending-index sum
  double total_norm() const;     // includes the tail bound

 private:
  std::vector<Vec> parts_;
  double tail_bound_;
};

// Both sides must describe the same truncation.
void check_same_shape(const BlockSystem& system, const BlockVector& x);

}  // namespace l2control
