#include "ptffool/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ptffool {

SymMatrix EigenDecomposition::reconstruct() const {
  SymMatrix r(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i; j < n; ++j) {
      double s = 0.0;
      for (unsigned l = 0; l < n; ++l) s += q(i, l) * values[l] * q(j, l);
      r.set(i, j, s);
    }
  }
  return r;
}

double EigenDecomposition::orthogonality_error() const {
  double worst = 0.0;
  for (unsigned a = 0; a < n; ++a) {
    for (unsigned b = a; b < n; ++b) {
      double s = 0.0;
      for (unsigned l = 0; l < n; ++l) s += q(l, a) * q(l, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

EigenDecomposition eigendecompose_symmetric(const SymMatrix& input) {
  const unsigned n = input.size();
  std::vector<double> a = input.to_dense();
  std::vector<double> v(std::size_t{n} * n, 0.0);
  for (unsigned i = 0; i < n; ++i) v[std::size_t{i} * n + i] = 1.0;
  auto at = [&](unsigned i, unsigned j) -> double& { return a[std::size_t{i} * n + j]; };

  const double norm = input.frobenius();
  const double target = tolerances().jacobi_rel_offdiag * norm;
  const int max_sweeps = tolerances().jacobi_max_sweeps;

  EigenDecomposition out;
  out.n = n;
  int sweep = 0;
  for (;; ++sweep) {
    double off = 0.0;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) off += 2.0 * at(i, j) * at(i, j);
    if (std::sqrt(off) <= target) break;
    require(sweep < max_sweeps, ErrorKind::tolerance,
            "Jacobi did not converge in " + std::to_string(max_sweeps) +
                " sweeps (off-diagonal mass " + std::to_string(std::sqrt(off)) + ")");
    for (unsigned p = 0; p + 1 < n; ++p) {
      for (unsigned q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (unsigned k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (unsigned k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (unsigned k = 0; k < n; ++k) {
          double& vkp = v[std::size_t{k} * n + p];
          double& vkq = v[std::size_t{k} * n + q];
          const double x = vkp;
          const double y = vkq;
          vkp = c * x - s * y;
          vkq = s * x + c * y;
        }
      }
    }
  }

  std::vector<unsigned> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(),
                   [&](unsigned x, unsigned y) { return at(x, x) > at(y, y); });
  out.values.resize(n);
  out.vectors.assign(std::size_t{n} * n, 0.0);
  for (unsigned j = 0; j < n; ++j) {
    out.values[j] = at(order[j], order[j]);
    for (unsigned i = 0; i < n; ++i) out.vectors[std::size_t{i} * n + j] = v[std::size_t{i} * n + order[j]];
  }
  out.sweeps = sweep;
  return out;
}

EigenDecomposition eigendecompose_symmetric(unsigned n, std::span<const double> dense) {
  return eigendecompose_symmetric(SymMatrix::from_dense(n, dense));
}

namespace {

void add_outer(SymMatrix& m, const EigenDecomposition& e, unsigned col, double lambda) {
  for (unsigned i = 0; i < e.n; ++i) {
    const double qi = e.q(i, col) * lambda;
    if (qi == 0.0) continue;
    for (unsigned j = i; j < e.n; ++j) m.add(i, j, qi * e.q(j, col));
  }
}

}  // namespace

SpectralDecomposition spectral_decompose(const DegTwoPoly& p, double delta) {
  require(delta > 0.0, ErrorKind::invalid_argument, "delta must be positive");
  SpectralDecomposition d;
  d.n = p.n;
  d.delta = delta;
  d.p1 = SymMatrix(p.n);
  d.p2 = SymMatrix(p.n);
  d.p3 = SymMatrix(p.n);
  d.p4 = p.linear;
  d.constant = p.constant;
  d.eigen = eigendecompose_symmetric(p.quad);
  const double tie = tolerances().eigen_tie;
  for (unsigned j = 0; j < p.n; ++j) {
    const double lambda = d.eigen.values[j];
    if (lambda > delta + tie) {
      add_outer(d.p1, d.eigen, j, lambda);
    } else if (lambda < -delta - tie) {
      add_outer(d.p2, d.eigen, j, -lambda);
    } else {
      add_outer(d.p3, d.eigen, j, lambda);
    }
  }
  d.upsilon = d.p3.trace();
  return d;
}

namespace {

double psd_root(double v, const char* which) {
  if (v >= 0.0) return std::sqrt(v);
  require(v >= -tolerances().mp_corrupt, ErrorKind::decomposition_corruption,
          std::string(which) + "(x) = " + std::to_string(v) + " is materially negative");
  return 0.0;
}

}  // namespace

std::array<double, 4> evaluate_mp(const SpectralDecomposition& dec, std::span<const double> x) {
  require(x.size() == dec.n, ErrorKind::invalid_argument, "point dimension mismatch");
  double lin = 0.0;
  for (unsigned i = 0; i < dec.n; ++i) lin += dec.p4[i] * x[i];
  return {psd_root(dec.p1.quadratic_form(x), "p1"), psd_root(dec.p2.quadratic_form(x), "p2"),
          dec.p3.quadratic_form(x) - dec.upsilon, lin};
}

std::array<double, 4> evaluate_mp(const SpectralDecomposition& dec, PointMask x) {
  std::vector<double> v(dec.n);
  for (unsigned i = 0; i < dec.n; ++i) v[i] = coordinate(x, i);
  return evaluate_mp(dec, v);
}

double evaluate_decomposed(const SpectralDecomposition& dec, std::span<const double> x) {
  double lin = 0.0;
  for (unsigned i = 0; i < dec.n; ++i) lin += dec.p4[i] * x[i];
  return dec.p1.quadratic_form(x) - dec.p2.quadratic_form(x) + dec.p3.quadratic_form(x) + lin +
         dec.constant;
}

DecompositionCheck check_decomposition(const SpectralDecomposition& dec, const SymMatrix& a) {
  DecompositionCheck c;
  const double norm = a.frobenius();
  const double slack = tolerances().reconstruct * std::max(1.0, norm);
  const double zero = tolerances().zero_eigen_rel * std::max(1.0, norm);

  c.psd_gap = true;
  c.min_nonzero_p1p2 = std::numeric_limits<double>::infinity();
  for (const SymMatrix* part : {&dec.p1, &dec.p2}) {
    for (double lambda : eigendecompose_symmetric(*part).values) {
      if (std::abs(lambda) <= zero) continue;
      c.min_nonzero_p1p2 = std::min(c.min_nonzero_p1p2, lambda);
      if (lambda < dec.delta - slack) c.psd_gap = false;
    }
  }

  for (double lambda : eigendecompose_symmetric(dec.p3).values)
    c.p3_spectral_radius = std::max(c.p3_spectral_radius, std::abs(lambda));
  c.small_part = c.p3_spectral_radius < dec.delta + tolerances().eigen_tie + slack;

  const double bound = norm * (1.0 + 1e-12);
  c.norms = dec.p1.frobenius() <= bound && dec.p2.frobenius() <= bound && dec.p3.frobenius() <= bound;

  c.max_reconstruction_error = (dec.p1 - dec.p2 + dec.p3).max_abs_diff(a);
  c.reconstruction = c.max_reconstruction_error <= tolerances().reconstruct;
  return c;
}

MatrixFacts matrix_facts(const SymMatrix& a) {
  MatrixFacts f;
  f.frobenius = a.frobenius();
  f.trace = a.trace();
  const auto e = eigendecompose_symmetric(a);
  const double zero = tolerances().zero_eigen_rel * std::max(1.0, f.frobenius);
  bool has_negative = false;
  f.lambda_min_nonzero = 0.0;
  for (double lambda : e.values) {
    f.lambda_max_magnitude = std::max(f.lambda_max_magnitude, std::abs(lambda));
    if (std::abs(lambda) <= zero) continue;
    if (lambda < 0) has_negative = true;
    if (f.lambda_min_nonzero == 0.0 || std::abs(lambda) < f.lambda_min_nonzero)
      f.lambda_min_nonzero = std::abs(lambda);
  }
  f.psd_with_gap = !has_negative && f.lambda_min_nonzero > 0.0;
  if (f.psd_with_gap) {
    const double rhs = f.frobenius * f.frobenius / f.lambda_min_nonzero;
    f.small_constant_check = std::abs(f.trace) <= rhs * (1.0 + 1e-12);
  }
  return f;
}

}  // namespace ptffool
