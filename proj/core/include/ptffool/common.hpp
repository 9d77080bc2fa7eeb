#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ptffool {

using Rational = mpq_class;
using BigInt = mpz_class;

enum class ErrorKind {
  invalid_argument,
  invalid_order,
  resource,
  configuration,
  degenerate_input,
  contract_violation,
  decomposition_corruption,
  tolerance,
  inconclusive,
  parse,
  internal,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

// Every numeric tolerance and budget used by the library. Defaults are the
// documented values; the CLI may override individual entries by name.
struct Tolerances {
  // kwise_spaces
  std::uint64_t support_budget = std::uint64_t{1} << 24;
  double gaussian_marginal_tol = 0.05;     // |E[Z^2] - 1| for inverse_cdf
  unsigned gaussian_default_log2_q = 20;

  // ptf_core
  double jacobi_rel_offdiag = 1e-12;
  int jacobi_max_sweeps = 40;
  double eigen_tie = 1e-12;                // eigenvalues within this of +-delta go to p3
  double mp_clamp = 1e-10;                 // p1(x), p2(x) above -mp_clamp are clamped to 0
  double mp_corrupt = 1e-6;                // below -mp_corrupt raises
  double reconstruct = 1e-10;
  double zero_eigen_rel = 1e-9;            // |lambda| <= this * ||A||_2 counts as zero

  // moments
  double eigenbound_constant = 128.0;
  unsigned exact_max_n = 20;
  unsigned exact_max_k = 16;

  // ftmol
  double unit_integral_tol = 1e-3;
  double bhat_agree_tol = 1e-8;
  double xalpha_rel_tol = 1e-6;
  double boundary_half_tol = 1e-4;
  double inconclusive_tail_fraction = 0.10;

  // fooling_harness
  double lp_feasibility = 1e-9;
  double lp_optimality = 1e-9;
  double lp_pivot = 1e-9;
  int lp_max_iterations = 200000;
  int lp_refactor_interval = 400;
  int lp_stall_window = 5000;               // non-improving pivots before Bland's rule
  double lp_result_tol = 1e-7;
  double certificate_gap_tol = 1e-6;
  unsigned certificate_denominator_log2 = 32;
  unsigned lp_max_n = 14;
  std::uint64_t lp_max_rows = 4096;

  // regularity_tree
  double tree_independence_constant = 2.0;  // k = ceil(c * log2(1/tau)) + 2
  unsigned tree_max_leaves_log2 = 18;
  unsigned tree_depth_cap = 18;

  // gw_rounding
  double gw_unit_norm = 1e-8;
  double gw_k_constant = 4.0;               // k = ceil(c / eps^2)

  // sandwich constant B of the regular-case Taylor argument; uncalibrated.
  double kwise_fools_B = 4.0;
};

Tolerances& tolerances();

// Sets a tolerance by field name; returns false for unknown names.
bool set_tolerance(std::string_view name, double value);
// name=value listing of every tolerance, in declaration order.
std::vector<std::pair<std::string, double>> list_tolerances();

// Splittable seeding: derive independent 64-bit seeds from a master seed and
// a stream index, so per-task randomness does not depend on scheduling.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// Worker count from PTF_FOOL_THREADS (default: hardware concurrency, >= 1).
unsigned worker_count();

// Runs body(block) for block in [0, blocks) across worker threads. Callers
// write per-block results into preallocated slots and merge them in index
// order, which keeps reductions independent of the thread count.
void parallel_blocks(std::size_t blocks,
                     const std::function<void(std::size_t)>& body);

// Double-double accumulator (error-free transformations).
class DoubleDouble {
 public:
  DoubleDouble() = default;
  explicit DoubleDouble(double v) : hi_(v) {}
  void add(double v);
  void add(const DoubleDouble& o);
  double value() const { return hi_ + lo_; }
  double hi() const { return hi_; }
  double lo() const { return lo_; }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

// Exact conversion of a finite double to a rational.
Rational to_rational(double v);

// Parses "p/q", an integer, or a decimal literal exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

}  // namespace ptffool
