#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ptffool/poly.hpp"

namespace ptffool {

/// Eigenpairs of a real symmetric matrix, eigenvalues descending.
/// `vectors` is row-major n x n with eigenvector j in column j.
struct EigenDecomposition {
  unsigned n = 0;
  std::vector<double> values;
  std::vector<double> vectors;
  int sweeps = 0;

  double q(unsigned row, unsigned col) const { return vectors[std::size_t{row} * n + col]; }
  SymMatrix reconstruct() const;
  // max |(Q^T Q - I)_ij|
  double orthogonality_error() const;
};

// Cyclic Jacobi; off-diagonal Frobenius mass is driven below
// jacobi_rel_offdiag * ||A||_2, else a tolerance error after the sweep cap.
EigenDecomposition eigendecompose_symmetric(const SymMatrix& a);
EigenDecomposition eigendecompose_symmetric(unsigned n, std::span<const double> dense);

/// p = p1 - p2 + p3 + p4 + C with p1, p2 PSD (eigenvalues >= delta) and p3
/// the small-eigenvalue remainder.
struct SpectralDecomposition {
  unsigned n = 0;
  SymMatrix p1;
  SymMatrix p2;
  SymMatrix p3;
  std::vector<double> p4;
  double constant = 0.0;
  double upsilon = 0.0;  // tr(A_p3)
  double delta = 0.0;
  EigenDecomposition eigen;
};

SpectralDecomposition spectral_decompose(const DegTwoPoly& p, double delta);

// M_p(x) = (sqrt(p1(x)), sqrt(p2(x)), p3(x) - Upsilon, p4(x)).
std::array<double, 4> evaluate_mp(const SpectralDecomposition& dec, std::span<const double> x);
std::array<double, 4> evaluate_mp(const SpectralDecomposition& dec, PointMask x);

// p1(x) - p2(x) + p3(x) + p4(x) + C
double evaluate_decomposed(const SpectralDecomposition& dec, std::span<const double> x);

inline int sgn(double v) { return v < 0.0 ? -1 : 1; }

struct DecompositionCheck {
  bool psd_gap = false;        // p1, p2 PSD, nonzero eigenvalues >= delta
  bool small_part = false;     // max |lambda(p3)| < delta
  bool norms = false;          // ||p_i||_2 <= ||A||_2
  bool reconstruction = false; // p1 - p2 + p3 == A entrywise
  double max_reconstruction_error = 0.0;
  double p3_spectral_radius = 0.0;
  double min_nonzero_p1p2 = 0.0;

  bool all() const { return psd_gap && small_part && norms && reconstruction; }
};

DecompositionCheck check_decomposition(const SpectralDecomposition& dec, const SymMatrix& a);

struct MatrixFacts {
  double frobenius = 0.0;
  double trace = 0.0;
  double lambda_min_nonzero = 0.0;   // smallest |lambda| among nonzero eigenvalues
  double lambda_max_magnitude = 0.0;
  bool psd_with_gap = false;
  // |tr A| <= ||A||_2^2 / lambda_min, evaluated only for PSD-with-gap input.
  std::optional<bool> small_constant_check;
};

MatrixFacts matrix_facts(const SymMatrix& a);

}  // namespace ptffool
