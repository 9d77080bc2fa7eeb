#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "ptffool/moments.hpp"

using namespace ptffool;
using ptffool::test::direct_value;
using ptffool::test::random_poly;
using ptffool::test::random_symmetric;

TEST(Moments, ExactMatchesBruteForce) {
  const auto p = random_poly(9, 4);
  const auto m = exact_abs_moments(p, 5, 0.25);
  for (unsigned k = 1; k <= 5; ++k) {
    long double s = 0;
    for (std::uint64_t x = 0; x < 512; ++x) s += std::pow(std::abs(direct_value(p, x) - 0.25), k);
    EXPECT_NEAR(m[k - 1], static_cast<double>(s / 512), 1e-10 * static_cast<double>(s / 512));
  }
}

TEST(Moments, MonteCarloNearExactAndSeeded) {
  const auto p = random_poly(10, 9);
  const auto ex = exact_abs_moments(p, 2);
  const auto a = mc_abs_moments(p, 2, 200000, 5);
  const auto b = mc_abs_moments(p, 2, 200000, 5);
  EXPECT_EQ(a, b);
  EXPECT_NEAR(a[1], ex[1], 0.02 * ex[1]);
}

TEST(Moments, SecondMomentIdentity) {
  for (unsigned s = 0; s < 20; ++s) {
    const unsigned n = 2 + s % 11;
    const auto a = random_symmetric(n, 300 + s, true);
    DegTwoPoly p(n);
    p.quad = a;
    double off = 0.0;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    EXPECT_NEAR(exact_abs_moments(p, 2)[1], 4.0 * off, 1e-12 * std::max(1.0, off));
  }
}

TEST(Moments, EigenboundRatio) {
  const unsigned ks[] = {2, 4, 6, 8};
  for (unsigned s = 0; s < 10; ++s) {
    const auto a = random_symmetric(3 + s % 8, 400 + s);
    for (const auto& r : eigenbound_ratios(a, ks)) {
      EXPECT_TRUE(r.passed);
      EXPECT_GT(r.ratio, 0.0);
      EXPECT_EQ(r.ratio, eigenbound_ratio(a, r.k).ratio);
    }
  }
  EXPECT_EQ(eigenbound_ratio(SymMatrix(4), 4).ratio, 0.0);
}

TEST(Moments, KhintchineClosedFormFourth) {
  // E[(a.x)^4] = 3 |a|^4 - 2 sum a_i^4.
  const std::vector<double> a{1.0, -2.0, 0.5, 3.0};
  double s2 = 0, s4 = 0;
  for (double v : a) s2 += v * v, s4 += v * v * v * v;
  const auto r = khintchine_check(a, 4);
  EXPECT_NEAR(r.value, 3 * s2 * s2 - 2 * s4, 1e-10);
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.bound, s2 * s2 * 16.0, 1e-10);
}

TEST(Moments, BoundMomentAndTail) {
  const auto a = random_symmetric(8, 17);
  EXPECT_TRUE(boundmoment_check(a, 4).passed);
  const auto p = random_poly(10, 21);
  const auto t = hypercontractive_tail_check(p, 3.0);
  EXPECT_TRUE(t.exact);
  EXPECT_LE(t.empirical_tail, 1.0);
}
