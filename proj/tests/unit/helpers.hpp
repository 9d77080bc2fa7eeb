#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ptffool/poly.hpp"

namespace ptffool::test {

inline DegTwoPoly random_poly(unsigned n, std::uint64_t seed, bool with_linear = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DegTwoPoly p(n);
  p.constant = 0.3 * g(rng);
  for (unsigned i = 0; i < n; ++i) {
    if (with_linear) p.linear[i] = g(rng);
    for (unsigned j = i + 1; j < n; ++j) p.add_term(i, j, g(rng));
  }
  return p;
}

inline SymMatrix random_symmetric(unsigned n, std::uint64_t seed, bool trace_free = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SymMatrix a(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j)
      if (i != j || !trace_free) a.set(i, j, g(rng));
  return a;
}

// Direct evaluation from the dense definition, independent of DegTwoPoly::evaluate.
inline double direct_value(const DegTwoPoly& p, std::uint64_t mask) {
  std::vector<double> x(p.n);
  for (unsigned i = 0; i < p.n; ++i) x[i] = ((mask >> i) & 1U) ? -1.0 : 1.0;
  double v = p.constant;
  for (unsigned i = 0; i < p.n; ++i) {
    v += p.linear[i] * x[i];
    for (unsigned j = 0; j < p.n; ++j) v += p.quad(i, j) * x[i] * x[j];
  }
  return v;
}

inline int direct_sign(const DegTwoPoly& p, std::uint64_t mask) { return direct_value(p, mask) < 0.0 ? -1 : 1; }

}  // namespace ptffool::test
