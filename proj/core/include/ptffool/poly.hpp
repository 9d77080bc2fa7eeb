#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ptffool/bits.hpp"
#include "ptffool/common.hpp"

namespace ptffool {

/// Real symmetric matrix stored as its packed upper triangle, so symmetry
/// holds exactly by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(unsigned n) : n_(n), data_(std::size_t{n} * (n + 1) / 2, 0.0) {}

  // Row-major dense input; throws contract_violation unless exactly symmetric.
  static SymMatrix from_dense(unsigned n, std::span<const double> dense);
  static SymMatrix identity(unsigned n);
  static SymMatrix diagonal(std::span<const double> d);

  unsigned size() const { return n_; }
  double operator()(unsigned i, unsigned j) const { return data_[index(i, j)]; }
  void set(unsigned i, unsigned j, double v) { data_[index(i, j)] = v; }
  void add(unsigned i, unsigned j, double v) { data_[index(i, j)] += v; }

  std::vector<double> to_dense() const;
  double frobenius() const;  // ||A||_2 in the Frobenius sense
  double trace() const;
  bool is_zero() const;
  double quadratic_form(std::span<const double> x) const;  // x^T A x
  double max_abs_diff(const SymMatrix& other) const;

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  std::size_t index(unsigned i, unsigned j) const {
    if (i > j) std::swap(i, j);
    const std::size_t row = i;
    return row * n_ - (row * (row + 1)) / 2 + j;
  }

  unsigned n_ = 0;
  std::vector<double> data_;
};

/// Degree-2 polynomial p(x) = C + sum_i L_i x_i + x^T A x with A symmetric.
/// The coefficient a_ij of x_i x_j (i < j) is stored as A_ij = A_ji = a_ij/2.
struct DegTwoPoly {
  unsigned n = 0;
  double constant = 0.0;
  std::vector<double> linear;
  SymMatrix quad;

  DegTwoPoly() = default;
  explicit DegTwoPoly(unsigned dim) : n(dim), linear(dim, 0.0), quad(dim) {}

  // Adds coef * x_i * x_j (i may equal j).
  void add_term(unsigned i, unsigned j, double coef);

  double evaluate(std::span<const double> x) const;
  double evaluate(PointMask x) const;  // on the hypercube, n <= 64

  DegTwoPoly scaled(double s) const;
};

/// Multilinear form on the hypercube: x_i^2 = 1 folds diag(A) into C.
struct Multilinearization {
  DegTwoPoly poly;    // zero diagonal
  double folded = 0;  // tr(A) moved into the constant
};

Multilinearization multilinearize(const DegTwoPoly& p);

/// Fourier coefficients keyed by subset bitmask (n <= 64).
struct FourierExpansion {
  unsigned n = 0;
  std::map<std::uint64_t, double> coeffs;

  double sum_squares(bool include_empty = true) const;
};

FourierExpansion to_fourier(const DegTwoPoly& p);
// Requires degree <= 2; the result is multilinear.
DegTwoPoly from_fourier(const FourierExpansion& f);

struct InfluenceReport {
  std::vector<double> influence;
  double total = 0.0;
};

InfluenceReport influences(const DegTwoPoly& p);

struct RegularityReport {
  bool is_regular = false;
  double max_ratio = 0.0;
  unsigned argmax = 0;
};

RegularityReport regularity(const DegTwoPoly& p, double tau);

/// tau-critical index over influences sorted non-increasingly (ties by
/// variable index). A ratio with zero numerator counts as 0, so the index
/// never exceeds the number of nonzero influences. `infinite` marks the case
/// where every ratio with nonzero numerator exceeds tau, i.e. the index is
/// reached only by exhausting all influential variables.
struct CriticalIndex {
  std::size_t index = 0;
  bool infinite = false;
  std::vector<unsigned> order;  // variables by non-increasing influence
  std::vector<double> ratios;   // ratios[i] = Inf_(i+1) / sum_{j>i} Inf_(j)
};

CriticalIndex critical_index(const DegTwoPoly& p, double tau);
CriticalIndex critical_index_of(std::span<const double> influence, double tau);

// Substitutes x_var = value (+1 or -1); the variable stays in the index
// space with all its coefficients zeroed.
DegTwoPoly restrict_variable(const DegTwoPoly& p, unsigned var, int value);

// Polynomial text format, 1-based indices:
//   n
//   C <value>
//   L i <value>
//   Q i j <value>     (i <= j, coefficient of x_i x_j)
void write_poly(std::ostream& os, const DegTwoPoly& p);
DegTwoPoly read_poly(std::istream& is);
void save_poly(const std::string& path, const DegTwoPoly& p);
DegTwoPoly load_poly(const std::string& path);

}  // namespace ptffool
