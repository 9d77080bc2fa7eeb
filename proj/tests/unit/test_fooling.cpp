#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "ptffool/fooling.hpp"
#include "ptffool/hypercube.hpp"

using namespace ptffool;
using ptffool::test::direct_sign;
using ptffool::test::random_poly;

namespace {

DegTwoPoly x1x2_plus_x3x4() {
  DegTwoPoly p(4);
  p.add_term(0, 1, 1.0);
  p.add_term(2, 3, 1.0);
  return p;
}

Rational brute_expectation(const DegTwoPoly& p, const SampleSpace& s) {
  Rational e;
  for (std::size_t i = 0; i < s.size(); ++i) e += s.weight(i) * direct_sign(p, s.points[i]);
  return e;
}

}  // namespace

TEST(Fooling, ExactExpectationMatchesBruteForce) {
  const auto p = random_poly(8, 31);
  Rational e;
  for (std::uint64_t x = 0; x < 256; ++x) e += direct_sign(p, x);
  e /= 256;
  EXPECT_EQ(exact_sgn_expectation(p), e);
  const auto s = build_kwise_bernoulli(8, 3, KwiseMethod::bch_parity);
  EXPECT_EQ(exact_sgn_expectation(p, s), brute_expectation(p, s));
}

TEST(Fooling, ProductOfTwoVariables) {
  DegTwoPoly p(2);
  p.add_term(0, 1, 1.0);
  const auto k1 = worst_case_lp(p, 1);
  const auto k2 = worst_case_lp(p, 2);
  EXPECT_NEAR(k1.deviation, 1.0, 1e-9);
  EXPECT_NEAR(k2.deviation, 0.0, 1e-9);
  EXPECT_NEAR(*k1.lp_max, 1.0, 1e-9);
  EXPECT_NEAR(*k1.lp_min, -1.0, 1e-9);
  EXPECT_NEAR(k1.indicator_deviation, 0.5, 1e-9);
}

TEST(Fooling, GoldenFourVariableValues) {
  const auto p = x1x2_plus_x3x4();
  EXPECT_EQ(exact_sgn_expectation(p), Rational(1, 2));
  const double lp_max[] = {1, 1, 1, 0.5};
  const double lp_min[] = {-1, 0, 0, 0.5};
  for (unsigned k = 1; k <= 4; ++k) {
    const auto r = worst_case_lp(p, k);
    EXPECT_NEAR(*r.lp_max, lp_max[k - 1], 1e-9) << k;
    EXPECT_NEAR(*r.lp_min, lp_min[k - 1], 1e-9) << k;
  }
}

TEST(Fooling, WeakDualitySandwich) {
  // Witness (exact k-wise distribution) <= LP value <= certificate expectation.
  for (unsigned s = 0; s < 4; ++s) {
    const auto p = random_poly(5, 40 + s);
    for (unsigned k = 1; k <= 3; ++k) {
      const auto r = worst_case_lp(p, k);
      ASSERT_TRUE(r.upper && r.lower && r.witness_max && r.witness_min);
      EXPECT_TRUE(r.upper->accepted());
      EXPECT_TRUE(r.lower->accepted());
      EXPECT_TRUE(verify_kwise_exact(*r.witness_max, k).pass);
      EXPECT_TRUE(verify_kwise_exact(*r.witness_min, k).pass);
      const Rational wmax = brute_expectation(p, *r.witness_max);
      const Rational wmin = brute_expectation(p, *r.witness_min);
      EXPECT_LE(wmax, r.upper->expectation);
      EXPECT_GE(wmin, r.lower->expectation);
      EXPECT_NEAR(wmax.get_d(), *r.lp_max, 1e-6);
      EXPECT_NEAR(wmin.get_d(), *r.lp_min, 1e-6);
    }
  }
}

TEST(Fooling, PermutedSolveAgrees) {
  LpOptions opt;
  opt.permutation_seed = 7;
  const auto r = worst_case_lp(random_poly(6, 3), 2, opt);
  ASSERT_TRUE(r.cross_check_max && r.cross_check_min);
  EXPECT_TRUE(r.cross_check_agrees);
  EXPECT_NEAR(*r.cross_check_max, *r.lp_max, 1e-7);
}

TEST(Fooling, CertificateRoundTripAndViolation) {
  const auto p = x1x2_plus_x3x4();
  const auto r = worst_case_lp(p, 2);
  std::stringstream io;
  write_certificate(io, *r.upper);
  const auto c = read_certificate(io);
  EXPECT_EQ(c.coeffs, r.upper->coeffs);
  const auto f = sign_table(p);
  EXPECT_TRUE(verify_certificate(c, f).pointwise);
  auto broken = c;
  broken.coeffs[0] -= 10;
  const auto v = verify_certificate(broken, f);
  EXPECT_FALSE(v.pointwise);
  EXPECT_TRUE(v.violation.has_value());
}

TEST(Fooling, RepairWitnessIsExactlyKwise) {
  std::vector<double> w(32, 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double total = 0.0;
  for (auto& v : w) total += (v = u(rng));
  for (auto& v : w) v /= total;
  const auto s = repair_witness(5, 2, w);
  EXPECT_TRUE(verify_kwise_exact(s, 2).pass);
  Rational sum;
  for (std::size_t i = 0; i < s.size(); ++i) sum += s.weight(i);
  EXPECT_EQ(sum, 1);
}

TEST(Fooling, FullIndependenceCollapse) {
  for (unsigned s = 0; s < 3; ++s) {
    const auto p = random_poly(4 + s, 60 + s);
    EXPECT_LE(worst_case_lp(p, p.n).deviation, 1e-7);
  }
}

TEST(Fooling, SweepMonotone) {
  const auto sw = lp_sweep(random_poly(6, 77), 4);
  EXPECT_TRUE(sw.monotone);
  ASSERT_EQ(sw.reports.size(), 4u);
  for (std::size_t i = 1; i < sw.reports.size(); ++i)
    EXPECT_LE(sw.reports[i].deviation, sw.reports[i - 1].deviation + 1e-7);
}

TEST(Fooling, IntersectionOfTwo) {
  DegTwoPoly a(3), b(3);
  a.linear[0] = 1.0;
  b.linear[1] = 1.0;
  const std::vector<DegTwoPoly> ps{a, b};
  const auto r = intersection_deviation(ps, 3);
  EXPECT_EQ(r.uniform_expectation, Rational(1, 4));
  EXPECT_NEAR(r.deviation, 0.0, 1e-9);
}

TEST(Fooling, AnticoncentrationExact) {
  DegTwoPoly p(3);
  p.linear = {1.0, 1.0, 1.0};
  SampleSpace s;
  s.n = 3;
  for (std::uint64_t x = 0; x < 8; ++x) s.points.push_back(x);
  const auto r = anticoncentration_probe(p, 0.5, 1.0, s);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(*r.exact, Rational(3, 8));
}

TEST(Fooling, DimensionMismatchRejected) {
  const auto s = build_kwise_bernoulli(5, 2);
  EXPECT_THROW(deviation(random_poly(4, 1), s), Error);
}
