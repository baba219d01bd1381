#pragma once

#include <Eigen/Dense>

namespace l2control {

// Largest admissible block dimension.  Everything downstream sizes its
// scratch space off this, so the whole per-block layer lives on the stack.
inline constexpr int kMaxBlockDim = 8;

// Augmented (Van Loan style) exponentials double the dimension.
inline constexpr int kMaxKernelDim = 2 * kMaxBlockDim;

// Dynamic-size, fixed-capacity dense types: no heap traffic per block.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::AutoAlign,
                          kMaxKernelDim, kMaxKernelDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::AutoAlign, kMaxKernelDim, 1>;

}  // namespace l2control
