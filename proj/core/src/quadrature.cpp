#include "ptffool/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "ptffool/common.hpp"

namespace ptffool {

namespace {

GaussLegendre compute_rule(unsigned n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (unsigned i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (unsigned k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(unsigned order) {
  require(order >= 1, ErrorKind::invalid_argument, "quadrature order must be >= 1");
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendre>(compute_rule(order));
  return *slot;
}

void composite_rule(double a, double b, double width, unsigned order, std::vector<double>& x,
                    std::vector<double>& w) {
  x.clear();
  w.clear();
  if (b <= a) return;
  const auto& gl = gauss_legendre(order);
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / width));
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + h * (p + 0.5);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      x.push_back(mid + 0.5 * h * gl.nodes[i]);
      w.push_back(0.5 * h * gl.weights[i]);
    }
  }
}

}  // namespace ptffool
