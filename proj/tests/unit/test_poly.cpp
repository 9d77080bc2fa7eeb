#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "ptffool/bits.hpp"
#include "ptffool/hypercube.hpp"
#include "ptffool/poly.hpp"

using namespace ptffool;
using ptffool::test::direct_value;
using ptffool::test::random_poly;

TEST(Poly, EvaluateMatchesDirect) {
  for (unsigned s = 0; s < 5; ++s) {
    auto p = random_poly(7, s);
    p.add_term(2, 2, 0.7);
    for (std::uint64_t x = 0; x < 128; ++x) EXPECT_NEAR(p.evaluate(PointMask{x}), direct_value(p, x), 1e-12);
  }
}

TEST(Poly, FourierMatchesBruteForce) {
  const auto p = random_poly(6, 11);
  const auto f = to_fourier(p);
  for (std::uint64_t s = 0; s < 64; ++s) {
    double c = 0.0;
    for (std::uint64_t x = 0; x < 64; ++x) c += direct_value(p, x) * character(x, s);
    c /= 64.0;
    const auto it = f.coeffs.find(s);
    EXPECT_NEAR(it == f.coeffs.end() ? 0.0 : it->second, c, 1e-12) << s;
  }
}

TEST(Poly, InfluencesMatchFlipDefinition) {
  const auto p = random_poly(6, 3);
  const auto inf = influences(p);
  for (unsigned i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (std::uint64_t x = 0; x < 64; ++x) {
      const double d = (direct_value(p, x) - direct_value(p, x ^ (1u << i))) / 2.0;
      sum += d * d;
    }
    EXPECT_NEAR(inf.influence[i], sum / 64.0, 1e-12);
  }
}

TEST(Poly, MultilinearizeFoldsDiagonal) {
  DegTwoPoly p(3);
  p.add_term(0, 0, 2.0);
  p.add_term(0, 1, 1.0);
  const auto m = multilinearize(p);
  EXPECT_DOUBLE_EQ(m.folded, 2.0);
  EXPECT_DOUBLE_EQ(m.poly.constant, 2.0);
  EXPECT_DOUBLE_EQ(m.poly.quad(0, 0), 0.0);
}

TEST(Poly, RegularityGolden) {
  DegTwoPoly p(2);
  p.add_term(0, 1, 1.0);
  const auto r = regularity(p, 0.4);
  EXPECT_FALSE(r.is_regular);
  EXPECT_DOUBLE_EQ(r.max_ratio, 0.5);
  EXPECT_THROW(regularity(DegTwoPoly(3), 0.1), Error);
}

TEST(Poly, CriticalIndexOfSequence) {
  // Influences 8, 4, 2, 1, 1: ratios 1/2, 1/2, 1/2, 1/2, 1.
  const std::vector<double> inf{1, 8, 2, 1, 4};
  const auto ci = critical_index_of(inf, 0.6);
  EXPECT_EQ(ci.index, 0u);
  EXPECT_EQ(ci.order, (std::vector<unsigned>{1, 4, 2, 0, 3}));
  const auto tight = critical_index_of(inf, 0.4);
  EXPECT_EQ(tight.index, 5u);
  EXPECT_TRUE(tight.infinite);
  // 9 then eight 1s: 9/17 > 0.5, then 1/8 <= 0.5.
  std::vector<double> big(9, 1.0);
  big[0] = 9.0;
  EXPECT_EQ(critical_index_of(big, 0.5).index, 1u);
}

TEST(Poly, RestrictionAgreesOnSubcube) {
  const auto p = random_poly(5, 8);
  const auto r = restrict_variable(p, 2, -1);
  for (std::uint64_t x = 0; x < 32; ++x) {
    if (!((x >> 2) & 1U)) continue;
    EXPECT_NEAR(r.evaluate(PointMask{x}), p.evaluate(PointMask{x}), 1e-12);
    EXPECT_NEAR(r.evaluate(PointMask{x}), r.evaluate(PointMask{x & ~4u}), 1e-12);
  }
}

TEST(Poly, FileRoundTripOneBased) {
  std::stringstream io("3\nC 0.5\nL 1 2\nQ 1 3 -1.5\nQ 2 2 1\n");
  const auto p = read_poly(io);
  EXPECT_EQ(p.n, 3u);
  EXPECT_DOUBLE_EQ(p.linear[0], 2.0);
  EXPECT_DOUBLE_EQ(p.quad(0, 2), -0.75);
  EXPECT_DOUBLE_EQ(p.quad(1, 1), 1.0);
  std::stringstream out;
  write_poly(out, p);
  const auto q = read_poly(out);
  for (std::uint64_t x = 0; x < 8; ++x) EXPECT_DOUBLE_EQ(q.evaluate(PointMask{x}), p.evaluate(PointMask{x}));
  std::stringstream bad("2\nQ 0 1 1\n");
  EXPECT_THROW(read_poly(bad), Error);
}

TEST(Hypercube, GrayWalkAndTables) {
  const auto p = random_poly(10, 5);
  const auto values = value_table(p);
  const auto signs = sign_table(p);
  ASSERT_EQ(values.size(), 1024u);
  for (std::uint64_t x = 0; x < 1024; ++x) {
    EXPECT_NEAR(values[x], direct_value(p, x), 1e-10);
    EXPECT_EQ(signs[x], test::direct_sign(p, x));
  }
  DegTwoPoly z(2);
  EXPECT_EQ(exact_sign(z, 0), 1);
}
