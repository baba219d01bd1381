#include "l2control/dynamics.hpp"

#include <cmath>
#include <string>

#include "l2control/errors.hpp"
#include "l2control/matrix_exp.hpp"

namespace l2control {

BlockVector propagate(const BlockSystem& system, const BlockVector& x0, const ControlSignal& w,
                      double t, const QuadratureSpec& quad, double tail_decay_rate,
                      Exec exec) {
  check_same_shape(system, x0);
  if (w.dims() != system.dims()) throw InvalidInput("propagate: signal shape mismatch");
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InvalidHorizon("propagate: t must be finite and nonnegative");
  if (t > w.horizon() * (1.0 + 1e-12) + 1e-15)
    throw InvalidHorizon("propagate: t = " + std::to_string(t) + " exceeds the signal horizon " +
                         std::to_string(w.horizon()));
  if (!(tail_decay_rate >= 0.0))
    throw InvalidInput("propagate: tail decay rate must be nonnegative");

  if (t == 0.0) return x0;

  const bool forced = w.kind() != ControlSignal::Kind::Zero;
  CompositeGrid grid;
  if (forced) grid = make_grid(quad, t, w.breakpoints());

  const int n = system.block_count();
  std::vector<Vec> parts(n);
  for_each_block(exec, n, [&](int i) {
    const Mat& a = system.block(i).entries();
    Vec acc = x0.part(i);
    if (forced) {
      // Accumulate e^{-sA} w(s) node by node; within a uniform segment the
      // node exponential splits as D_j * S_p with S advancing by one product
      // per panel, so each node costs two small matvecs.
      for (const UniformSegment& seg : grid.segments) {
        const SegmentExpBasis basis = make_negative_exp_basis(a, seg);
        Mat s_p = basis.segment_base;
        int k = 0;
        for (int p = 0; p < seg.panels; ++p) {
          for (std::size_t j = 0; j < seg.offsets.size(); ++j, ++k) {
            const Vec w_node = w.eval_block(i, seg.point(k));
            acc.noalias() += seg.weights[j] * (basis.node_offset[j] * (s_p * w_node));
          }
          if (p + 1 < seg.panels) s_p = (s_p * basis.panel_step).eval();
        }
      }
    }
    parts[i] = expm(a, t) * acc;
  });

  return BlockVector(std::move(parts), x0.tail_bound() * std::exp(-tail_decay_rate * t));
}

std::vector<std::pair<double, double>> free_decay(const BlockSystem& system,
                                                  const BlockVector& x0,
                                                  std::span<const double> times,
                                                  double tail_decay_rate, Exec exec) {
  check_same_shape(system, x0);
  for (double t : times)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw InvalidHorizon("free decay: sample times must be finite and nonnegative");

  double t_max = 0.0;
  for (double t : times) t_max = std::max(t_max, t);
  const ControlSignal none = ControlSignal::zero(system.dims(), t_max);

  std::vector<std::pair<double, double>> out;
  out.reserve(times.size());
  for (double t : times) {
    const BlockVector x = propagate(system, x0, none, t, QuadratureSpec(), tail_decay_rate, exec);
    out.emplace_back(t, x.total_norm());
  }
  return out;
}

double l2_energy(const ControlSignal& w, const QuadratureSpec& quad, Exec exec) {
  if (auto exact = w.exact_energy()) return *exact;
  if (w.horizon() == 0.0) return 0.0;

  const CompositeGrid grid = make_grid(quad, w.horizon(), w.breakpoints());
  const int n = w.block_count();
  std::vector<double> per_block(n, 0.0);
  for_each_block(exec, n, [&](int i) {
    double e = 0.0;
    grid.for_each_node([&](double s, double weight) { e += weight * w.eval_block(i, s).squaredNorm(); });
    per_block[i] = e;
  });

  double total = 0.0;
  for (int i = 0; i < n; ++i) total += per_block[i];  // ascending, deterministic
  return total;
}

bool is_admissible(const ControlSignal& w, double bound, const QuadratureSpec& quad, Exec exec) {
  if (!(bound >= 0.0)) throw InvalidInput("admissibility: bound must be nonnegative");
  return l2_energy(w, quad, exec) <= bound * bound + 1e-9;
}

}  // namespace l2control
