#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptffool/poly.hpp"

namespace ptffool {

enum class MomentMode { exact, monte_carlo };
enum class Center { none, trace };

struct MomentReport {
  unsigned k = 0;
  MomentMode mode = MomentMode::exact;
  double value = 0.0;  // E[|f|^k]
  double bound = 0.0;
  double ratio = 0.0;
  bool passed = true;
  std::uint64_t samples = 0;  // points enumerated or drawn
  std::uint64_t seed = 0;
};

/// E[|f(x)|^j] for j = 1..kmax over the uniform cube, where
/// f = p - shift; double-double accumulation over a Gray-code walk.
std::vector<double> exact_abs_moments(const DegTwoPoly& p, unsigned kmax, double shift = 0.0);

/// Same moments from `samples` uniform cube points drawn from `seed`.
std::vector<double> mc_abs_moments(const DegTwoPoly& p, unsigned kmax, std::uint64_t samples,
                                   std::uint64_t seed, double shift = 0.0);

// 2^-n sum_x (p(x) - optional tr A)^k. Odd k uses |.|.
MomentReport exact_moment_hypercube(const DegTwoPoly& p, unsigned k, Center center);
MomentReport mc_moment_hypercube(const DegTwoPoly& p, unsigned k, Center center,
                                 std::uint64_t samples, std::uint64_t seed);

// (E|x^T A x - tr A|^k)^(1/k) / max{sqrt(k) ||A||_2, k lambda_max}, passed
// when <= eigenbound_constant. A zero matrix has ratio 0.
MomentReport eigenbound_ratio(const SymMatrix& a, unsigned k);
std::vector<MomentReport> eigenbound_ratios(const SymMatrix& a, std::span<const unsigned> ks);

// E[(a^T x)^k] <= ||a||_2^k k^(k/2)
MomentReport khintchine_check(std::span<const double> a, unsigned k);

// E|f|^k <= C^k ((||A||_2 k)^k + |tr A|^k) for f = x^T A x. `ratio` is the
// fitted C; passed when C <= 2 * eigenbound_constant, which the eigenbound
// constant and |u + v|^k <= 2^k (|u|^k + |v|^k) imply.
MomentReport boundmoment_check(const SymMatrix& a, unsigned k);

struct TailReport {
  unsigned degree = 0;
  double t = 0.0;
  double norm = 0.0;            // ||p||_2 = sqrt(E p^2)
  double empirical_tail = 0.0;  // Pr[|p| >= t ||p||_2]
  bool exact = true;
  std::uint64_t samples = 0;
  unsigned k = 0;               // 2 floor(t^(2/d) / 4)
  double bound = 1.0;           // (k^(d/2) / t)^k
  bool applicable = false;      // t > 8^(d/2)
  bool within_bound = true;
};

// Exact enumeration when n <= exact_max_n, else `trials` Monte Carlo draws.
TailReport hypercontractive_tail_check(const DegTwoPoly& p, double t, std::uint64_t trials = 0,
                                       std::uint64_t seed = 0);

// Pr[p(x) > threshold] over the uniform cube (exact, n <= exact_max_n).
double exact_upper_tail(const DegTwoPoly& p, double threshold);

struct InvarianceReport {
  double distance = 0.0;   // sup_t |F_cube(t) - F_gauss(t)|
  double band = 0.0;       // DKW half-width at 95%
  double argmax = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

InvarianceReport invariance_probe(const DegTwoPoly& p, std::uint64_t samples, std::uint64_t seed);

std::string to_string(MomentMode m);

}  // namespace ptffool
