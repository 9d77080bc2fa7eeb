#pragma once

#include <cmath>
#include <vector>

namespace ptffool {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached per order; safe to call from several threads.
const GaussLegendre& gauss_legendre(unsigned order);

template <class F>
double integrate(F&& f, double a, double b, unsigned order = 16) {
  const auto& gl = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * f(mid + half * gl.nodes[i]);
  return s * half;
}

// Composite rule with panels no wider than `width`.
template <class F>
double integrate_panels(F&& f, double a, double b, double width, unsigned order = 16) {
  if (b <= a) return 0.0;
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / width));
  const double h = (b - a) / static_cast<double>(panels);
  double s = 0.0;
  for (std::size_t p = 0; p < panels; ++p) s += integrate(f, a + h * p, a + h * (p + 1), order);
  return s;
}

// Nodes and weights of the composite rule, for callers that tabulate.
void composite_rule(double a, double b, double width, unsigned order, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace ptffool
