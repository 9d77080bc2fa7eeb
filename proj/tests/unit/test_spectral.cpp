#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "ptffool/spectral.hpp"

using namespace ptffool;
using ptffool::test::random_poly;
using ptffool::test::random_symmetric;

namespace {

Eigen::MatrixXd dense(const SymMatrix& a) {
  Eigen::MatrixXd m(a.size(), a.size());
  for (unsigned i = 0; i < a.size(); ++i)
    for (unsigned j = 0; j < a.size(); ++j) m(i, j) = a(i, j);
  return m;
}

Eigen::VectorXd eigen_values_desc(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a));
  return es.eigenvalues().reverse();
}

}  // namespace

TEST(Jacobi, EigenvaluesMatchEigen) {
  for (unsigned s = 0; s < 20; ++s) {
    const unsigned n = 2 + s % 11;
    const auto a = random_symmetric(n, 100 + s);
    const auto e = eigendecompose_symmetric(a);
    const auto ref = eigen_values_desc(a);
    for (unsigned i = 0; i < n; ++i) EXPECT_NEAR(e.values[i], ref(i), 1e-10 * (1 + std::abs(ref(i))));
    EXPECT_LT(e.orthogonality_error(), 1e-12);
    EXPECT_LT(e.reconstruct().max_abs_diff(a), 1e-11);
  }
}

TEST(Jacobi, RepeatedEigenvalues) {
  const std::vector<double> d{2, 2, -1};
  const auto e = eigendecompose_symmetric(SymMatrix::diagonal(d));
  EXPECT_EQ(e.values, (std::vector<double>{2, 2, -1}));
  EXPECT_EQ(e.sweeps, 0);
}

TEST(Spectral, InvariantsOnRandomInputs) {
  for (unsigned s = 0; s < 50; ++s) {
    const auto p = random_poly(2 + s % 9, 200 + s);
    const double delta = 0.1 + 0.05 * (s % 10);
    const auto dec = spectral_decompose(p, delta);
    const auto c = check_decomposition(dec, p.quad);
    EXPECT_TRUE(c.all()) << s;
    // Independent: p1 and p2 PSD per Eigen, p3 small per Eigen.
    const auto v1 = eigen_values_desc(dec.p1);
    const auto v2 = eigen_values_desc(dec.p2);
    const auto v3 = eigen_values_desc(dec.p3);
    EXPECT_GT(v1.minCoeff(), -1e-10);
    EXPECT_GT(v2.minCoeff(), -1e-10);
    EXPECT_LT(std::max(std::abs(v3.minCoeff()), std::abs(v3.maxCoeff())), delta);
    EXPECT_NEAR(dec.upsilon, dec.p3.trace(), 1e-12);
    std::vector<double> x(p.n);
    for (unsigned i = 0; i < p.n; ++i) x[i] = (i * 7 + s) % 3 - 1.0;
    EXPECT_NEAR(evaluate_decomposed(dec, x), p.evaluate(x), 1e-9);
  }
}

TEST(Spectral, NoSmallEigenvaluesMeansEmptyP3) {
  const std::vector<double> d{3, -2, 5};
  DegTwoPoly p(3);
  p.quad = SymMatrix::diagonal(d);
  const auto dec = spectral_decompose(p, 1.0);
  EXPECT_TRUE(dec.p3.is_zero());
  EXPECT_DOUBLE_EQ(dec.upsilon, 0.0);
  EXPECT_NEAR(dec.p1.trace(), 8.0, 1e-12);
  EXPECT_NEAR(dec.p2.trace(), 2.0, 1e-12);
}

TEST(Spectral, MatrixFactsSmallConstant) {
  const std::vector<double> d{2, 1, 0};
  const auto f = matrix_facts(SymMatrix::diagonal(d));
  EXPECT_DOUBLE_EQ(f.lambda_min_nonzero, 1.0);
  EXPECT_DOUBLE_EQ(f.lambda_max_magnitude, 2.0);
  EXPECT_TRUE(f.psd_with_gap);
  ASSERT_TRUE(f.small_constant_check);
  EXPECT_TRUE(*f.small_constant_check);  // 3 <= 5 / 1
}
