#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ptffool {

/// min c^T x subject to A x = b, x >= 0, with A of full row rank and b >= 0.
/// Columns are served by oracles so that structured programs never
/// materialize A.
class LinearProgram {
 public:
  virtual ~LinearProgram() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual double cost(std::size_t j) const = 0;
  virtual double rhs(std::size_t i) const = 0;
  virtual void column(std::size_t j, std::span<double> out) const = 0;
  // out[j] = y^T A_j for every column j.
  virtual void price(std::span<const double> y, std::span<double> out) const;
};

class DenseProgram final : public LinearProgram {
 public:
  // `a` is row-major rows x cols.
  DenseProgram(std::size_t rows, std::size_t cols, std::vector<double> a, std::vector<double> b,
               std::vector<double> c);

  std::size_t rows() const override { return m_; }
  std::size_t cols() const override { return n_; }
  double cost(std::size_t j) const override { return c_[j]; }
  double rhs(std::size_t i) const override { return b_[i]; }
  void column(std::size_t j, std::span<double> out) const override;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
};

/// Presents the columns of another program in permuted order.
class PermutedProgram final : public LinearProgram {
 public:
  PermutedProgram(const LinearProgram& base, std::vector<std::size_t> order);

  std::size_t rows() const override { return base_.rows(); }
  std::size_t cols() const override { return base_.cols(); }
  double cost(std::size_t j) const override { return base_.cost(order_[j]); }
  double rhs(std::size_t i) const override { return base_.rhs(i); }
  void column(std::size_t j, std::span<double> out) const override { base_.column(order_[j], out); }
  void price(std::span<const double> y, std::span<double> out) const override;

  std::size_t original(std::size_t j) const { return order_[j]; }

 private:
  const LinearProgram& base_;
  std::vector<std::size_t> order_;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus s);

struct SimplexOptions {
  double feasibility = 1e-9;
  double optimality = 1e-9;
  double pivot = 1e-9;
  int max_iterations = 200000;
  int refactor_interval = 400;
  int stall_window = 5000;  // non-improving pivots before switching to Bland's rule
};

// Options populated from the global tolerance table.
SimplexOptions default_simplex_options();

struct SimplexResult {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  std::vector<double> x;            // primal, one entry per column
  std::vector<double> y;            // duals, c_j - y^T A_j >= 0 at optimum
  std::vector<std::size_t> basis;   // column index per row
  int iterations = 0;
  int phase1_iterations = 0;
  int bland_pivots = 0;
};

/// Dense revised simplex with an explicit basis inverse (refactored through
/// LU), Dantzig pricing and a Bland fallback when the objective stalls.
SimplexResult solve_simplex(const LinearProgram& lp, const SimplexOptions& opt = default_simplex_options());

}  // namespace ptffool
