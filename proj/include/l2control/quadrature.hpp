#pragma once

#include <span>
#include <vector>

namespace l2control {

// Composite Gauss-Legendre rule: panels_per_unit uniform panels per unit of
// integration length, nodes points per panel.  The panel count for a horizon
// T is max(1, ceil(panels_per_unit * T)), so short horizons still integrate.
class QuadratureSpec {
 public:
  explicit QuadratureSpec(int panels_per_unit = 32, int nodes = 8);

  int panels_per_unit() const { return panels_per_unit_; }
  int nodes() const { return nodes_; }
  int panel_count(double length) const;

  // Same rule with twice the panel density (refinement runs).
  QuadratureSpec refined() const { return QuadratureSpec(2 * panels_per_unit_, nodes_); }

 private:
  int panels_per_unit_;
  int nodes_;
};

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
// n up to a few hundred converges in 3-4 steps per root.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

// One run of equal-width panels.  Nodes within a panel sit at start + p*width
// + offset[j] with weight weight[j]; uniform width is what lets the matrix
// exponential layer step between panels by a single product.
struct UniformSegment {
  double start = 0.0;
  double panel_width = 0.0;
  int panels = 0;
  std::vector<double> offsets;  // node offsets inside one panel, ascending
  std::vector<double> weights;  // matching weights, already scaled by width/2

  int node_count() const { return panels * static_cast<int>(offsets.size()); }
  double point(int k) const;
  double weight(int k) const { return weights[k % static_cast<int>(weights.size())]; }
};

// Composite grid over [0, t_end], split at the given interior breakpoints so
// integrand discontinuities always land on panel edges.
struct CompositeGrid {
  double t_end = 0.0;
  std::vector<UniformSegment> segments;

  int node_count() const;

  // Visits every node in ascending order: f(s, w).
  template <class F>
  void for_each_node(F&& f) const {
    for (const auto& seg : segments)
      for (int k = 0; k < seg.node_count(); ++k) f(seg.point(k), seg.weight(k));
  }
};

CompositeGrid make_grid(const QuadratureSpec& spec, double t_end,
                        std::span<const double> breakpoints = {});

}  // namespace l2control
