#include "l2control/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "l2control/errors.hpp"

namespace l2control {

QuadratureSpec::QuadratureSpec(int panels_per_unit, int nodes)
    : panels_per_unit_(panels_per_unit), nodes_(nodes) {
  if (panels_per_unit < 1) throw InvalidInput("quadrature: panels per unit must be >= 1");
  if (nodes < 2 || nodes > 64) throw InvalidInput("quadrature: nodes per panel must be in [2, 64]");
}

int QuadratureSpec::panel_count(double length) const {
  if (!(length > 0.0)) return 1;
  return std::max(1, static_cast<int>(std::ceil(panels_per_unit_ * length)));
}

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Roots of P_n by Newton from the Chebyshev-like initial guess; the rule is
  // symmetric so only the lower half is computed.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Recurrence for P_n(x) and P_{n-1}(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean-up pass keeps the weights symmetric to the last bit.
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[i] = -std::abs(x);
    rule.points[n - 1 - i] = std::abs(x);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

double UniformSegment::point(int k) const {
  const int m = static_cast<int>(offsets.size());
  return start + (k / m) * panel_width + offsets[k % m];
}

int CompositeGrid::node_count() const {
  int n = 0;
  for (const auto& seg : segments) n += seg.node_count();
  return n;
}

CompositeGrid make_grid(const QuadratureSpec& spec, double t_end,
                        std::span<const double> breakpoints) {
  if (!(t_end > 0.0)) throw InvalidHorizon("quadrature: grid horizon must be positive");

  std::vector<double> edges;
  edges.push_back(0.0);
  for (double b : breakpoints)
    if (b > 0.0 && b < t_end) edges.push_back(b);
  edges.push_back(t_end);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const GaussRule rule = gauss_legendre(spec.nodes());

  CompositeGrid grid;
  grid.t_end = t_end;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    UniformSegment seg;
    seg.start = a;
    seg.panels = spec.panel_count(b - a);
    seg.panel_width = (b - a) / seg.panels;
    const double half = seg.panel_width / 2.0;
    seg.offsets.reserve(rule.points.size());
    seg.weights.reserve(rule.points.size());
    for (std::size_t j = 0; j < rule.points.size(); ++j) {
      seg.offsets.push_back(half * (1.0 + rule.points[j]));
      seg.weights.push_back(half * rule.weights[j]);
    }
    grid.segments.push_back(std::move(seg));
  }
  return grid;
}

}  // namespace l2control
