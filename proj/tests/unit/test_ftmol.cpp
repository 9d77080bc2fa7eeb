#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ptffool/ftmol.hpp"

using namespace ptffool;

TEST(Ftmol, UnitIntegral) {
  for (unsigned d : {1u, 2u})
    for (double c : {1.0, 10.0, 100.0}) {
      const auto r = check_unit_integral(d, c);
      EXPECT_TRUE(r.passed) << d << " " << c;
      EXPECT_LE(r.error, 1e-3);
    }
}

TEST(Ftmol, BallMonomialIntegrals) {
  EXPECT_NEAR(ball_monomial_integral(1, {2}), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(ball_monomial_integral(1, {4}), 2.0 / 5.0, 1e-14);
  EXPECT_EQ(ball_monomial_integral(1, {3}), 0.0);
  EXPECT_NEAR(ball_monomial_integral(2, {0, 0}), std::numbers::pi, 1e-13);
  EXPECT_NEAR(ball_monomial_integral(2, {2, 0}), std::numbers::pi / 4.0, 1e-13);
  EXPECT_NEAR(ball_monomial_integral(2, {2, 2}), std::numbers::pi / 24.0, 1e-13);
  EXPECT_EQ(ball_monomial_integral(2, {1, 2}), 0.0);
}

TEST(Ftmol, BhatClosedFormAgreesWithQuadrature) {
  for (double rho : {0.0, 0.3, 1.0, 2.0, 4.5, 9.0, 17.0})
    EXPECT_NEAR(bhat_closed(1, rho), bhat_quadrature(1, rho), 1e-8) << rho;
  for (double rho : {0.0, 1.0, 3.0, 7.0}) EXPECT_NEAR(bhat_closed(2, rho), bhat_quadrature(2, rho), 1e-8) << rho;
}

TEST(Ftmol, DerivativeL1Bound) {
  for (unsigned d : {1u, 2u})
    for (unsigned a = 0; a <= 3; ++a)
      for (unsigned b = 0; b + a <= 3 && (d == 2 || b == 0); ++b) {
        MultiIndex beta = d == 1 ? MultiIndex{a} : MultiIndex{a, b};
        const auto r = deriv_l1_norm(d, beta);
        EXPECT_TRUE(r.passed || r.inconclusive);
        EXPECT_LE(r.value, std::ldexp(1.0, a + b) * (1 + 1e-3));
      }
}

TEST(Ftmol, TailMassMonotone) {
  for (unsigned d : {1u, 2u}) {
    double prev = 1.0;
    for (double z : {1.0, 2.0, 4.0, 8.0}) {
      const auto t = tail_mass(d, z);
      EXPECT_LE(t.tail, prev);
      EXPECT_NEAR(t.tail + t.inner, 1.0, 1e-3);
      prev = t.tail;
    }
  }
}

TEST(Ftmol, XAlphaNormExactVsQuadrature) {
  for (unsigned a = 0; a <= 4; ++a) {
    EXPECT_TRUE(xalpha_b_norm(1, {a}).passed);
    for (unsigned b = 0; a + b <= 4; ++b) EXPECT_TRUE(xalpha_b_norm(2, {a, b}).passed);
  }
}

TEST(Ftmol, MollifierSymmetryAndBoundary) {
  const auto r = Region::halfline(1, 0.2);
  for (double s : {0.0, 0.05, 0.3, 1.0}) {
    const std::vector<double> up{0.2 + s};
    const std::vector<double> down{0.2 - s};
    EXPECT_NEAR(mollify_eval(r, 20.0, up).value + mollify_eval(r, 20.0, down).value, 1.0, 1e-8);
  }
  const std::vector<double> corner{0.1, -0.4};
  EXPECT_NEAR(mollify_eval(Region::quadrant(corner), 10.0, corner).value, 0.25, 1e-4);
  const std::vector<double> deep{5.0};
  EXPECT_GT(mollify_eval(r, 50.0, deep).value, 0.99);
}
