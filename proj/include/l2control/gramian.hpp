#pragma once

#include <vector>

#include "l2control/block_system.hpp"
#include "l2control/parallel.hpp"
#include "l2control/quadrature.hpp"
#include "l2control/spd.hpp"

namespace l2control {

// Per-block controllability Gramian at horizon tau:
//   W(tau) = integral_0^tau e^{-sA} e^{-sA^T} ds.
// Substituting s -> tau - s gives W = D Wf D^T with D = e^{-tau A} and
//   Wf(tau) = integral_0^tau e^{sA} e^{sA^T} ds,
// and because the Gauss-Legendre node set is symmetric the two discrete sums
// are conjugate by D exactly.  Wf stays well conditioned for every tau (its
// integrand decays), while W itself has condition number ~e^{2 spread tau}
// and stops being factorizable in floating point around tau ~ 7 for spread
// spectra.  This class therefore keeps (A, tau, Wf factored) and routes all
// inverse applications through Wf:
//   <x, W^{-1} x> = |Lf^{-1} e^{tau A} x|^2,
//   W^{-1} x      = e^{tau A^T} Wf^{-1} e^{tau A} x,
// in which every exponential decays, so no intermediate ever explodes.
class GramianBlock {
 public:
  GramianBlock(Mat a, double tau, SPDMatrix forward);

  int dim() const { return forward_.dim(); }
  double tau() const { return tau_; }
  const SPDMatrix& forward() const { return forward_; }

  // The Gramian matrix itself, materialized as D Wf D^T.  Meant for
  // inspection and tests at moderate horizons (entries grow like e^{2 beta tau}).
  Mat matrix() const;

  double quadratic_inverse(const Vec& x) const;  // <x, W^{-1} x>
  Vec solve(const Vec& x) const;                 // W^{-1} x
  Vec core_solve(const Vec& x) const;            // Wf^{-1} e^{tau A} x

  // ||W^{-1}||_2 = 1 / sigma_min(D Lf)^2; diagnostic only.
  double inverse_norm() const;

 private:
  Mat a_;
  double tau_;
  Mat fwd_map_;  // e^{tau A}, contractive for stable A
  SPDMatrix forward_;
};

class BlockGramian {
 public:
  BlockGramian(double tau, std::vector<GramianBlock> blocks);

  double tau() const { return tau_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const GramianBlock& block(int i) const { return blocks_[i]; }

 private:
  double tau_;
  std::vector<GramianBlock> blocks_;
};

// Single-block Gramian by composite Gauss-Legendre on the defining integral,
// factored directly.  Fine for moderate horizons; the robust large-tau path
// lives in assemble_gramian/GramianBlock.
SPDMatrix gramian_block(const BlockMatrix& a, double tau, const QuadratureSpec& quad);

// Same integral through one augmented exponential (Van Loan's construction):
//   H = [[-A, I], [0, A^T]],  e^{tau H} = [[F, U], [0, G]],  W = U F^T.
// Quadrature-free; the cross-check oracle for the rule above.
Mat gramian_block_augmented(const BlockMatrix& a, double tau);

BlockGramian assemble_gramian(const BlockSystem& system, double tau, const QuadratureSpec& quad,
                              Exec exec = Exec::Parallel);

// Steering cost <x0, W(tau)^{-1} x0> summed over retained blocks in
// ascending index order.  The tail carries no Gramian data and is excluded;
// callers report the tail bound alongside.
double gramian_cost(const BlockGramian& gramian, const BlockVector& x0);

// Diagnostic for the decay bound
//   ||W_i(tau)^{-1}|| <= 2 C_i^2 beta_i / (e^{2 beta_i tau} - 1),
// with beta_i the slowest decay rate of the block (the rate that actually
// bounds sigma_min of the inverse-time flow) and C_i measured as the
// condition number of its eigenvector matrix (defective blocks report inf,
// which just makes the bound vacuous).  Reported, never enforced.
struct WInvBoundRow {
  int block = 0;
  double beta = 0.0;
  double conditioning = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  bool within = false;
};

struct WInvBoundReport {
  std::vector<WInvBoundRow> rows;
  bool all_within = true;
};

WInvBoundReport w_inv_bound_check(const BlockSystem& system, const BlockGramian& gramian);

}  // namespace l2control
