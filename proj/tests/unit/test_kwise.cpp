#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "ptffool/gf2m.hpp"
#include "ptffool/kwise.hpp"

using namespace ptffool;

namespace {

// Every k coordinates take each of the 2^k sign patterns with probability 2^-k.
bool patterns_uniform(const SampleSpace& s, unsigned k) {
  std::vector<unsigned> idx(k);
  for (unsigned i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::map<unsigned, Rational> mass;
    for (std::size_t t = 0; t < s.size(); ++t) {
      unsigned pat = 0;
      for (unsigned i = 0; i < k; ++i) pat |= ((s.points[t] >> idx[i]) & 1U) << i;
      mass[pat] += s.weight(t);
    }
    if (mass.size() != (1u << k)) return false;
    const Rational target(1, 1u << k);
    for (const auto& [pat, m] : mass)
      if (m != target) return false;
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && idx[i] == s.n - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (unsigned j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint64_t modulus, unsigned m) {
  std::uint64_t r = 0;
  for (unsigned i = 0; i < m; ++i)
    if ((b >> i) & 1U) r ^= std::uint64_t{a} << i;
  for (int i = 2 * static_cast<int>(m) - 2; i >= static_cast<int>(m); --i)
    if ((r >> i) & 1U) r ^= modulus << (i - m);
  return static_cast<std::uint32_t>(r);
}

}  // namespace

TEST(Gf2m, MultiplicationMatchesSchoolbook) {
  for (unsigned m : {1u, 3u, 5u, 8u, 13u}) {
    Gf2m f(m);
    EXPECT_TRUE(is_irreducible_gf2(f.modulus()));
    std::mt19937_64 rng(m);
    for (int t = 0; t < 200; ++t) {
      const auto a = static_cast<std::uint32_t>(rng() & (f.size() - 1));
      const auto b = static_cast<std::uint32_t>(rng() & (f.size() - 1));
      EXPECT_EQ(f.mul(a, b), slow_mul(a, b, f.modulus(), m));
      Gf2m::ConstMultiplier cm(f, a);
      EXPECT_EQ(cm(b), f.mul(a, b));
    }
  }
}

TEST(Kwise, PatternsUniformForBothMethods) {
  for (auto method : {KwiseMethod::vandermonde_bit, KwiseMethod::bch_parity}) {
    for (auto [n, k] : {std::pair{8u, 2u}, {8u, 3u}, {9u, 4u}, {6u, 5u}, {5u, 5u}}) {
      const auto s = build_kwise_bernoulli(n, k, method);
      EXPECT_TRUE(patterns_uniform(s, k)) << to_string(method) << " n=" << n << " k=" << k;
      EXPECT_TRUE(verify_kwise_exact(s, k).pass);
    }
  }
}

TEST(Kwise, SixteenFourExact) {
  const auto s = build_kwise_bernoulli(16, 4, KwiseMethod::bch_parity);
  const auto v = verify_kwise_exact(s, 4);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.subsets_checked, 16u + 120u + 560u + 1820u);
}

TEST(Kwise, DetectsBias) {
  SampleSpace s;
  s.n = 3;
  s.k_claimed = 2;
  s.points = {0b000, 0b011, 0b101, 0b110};  // x1 x2 x3 = +1 always
  EXPECT_TRUE(verify_kwise_exact(s, 2).pass);
  const auto v = verify_kwise_exact(s, 3);
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.worst_subset);
  EXPECT_EQ(*v.worst_subset, 0b111u);
  EXPECT_EQ(v.worst_bias, 1);
}

TEST(Kwise, OrderAboveDimensionRejected) {
  EXPECT_THROW(build_kwise_bernoulli(4, 5), Error);
}

TEST(Kwise, FileRoundTrip) {
  SampleSpace s;
  s.n = 3;
  s.k_claimed = 1;
  s.points = {0b000, 0b111, 0b010};
  s.weights = {Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  std::stringstream io;
  write_space(io, s);
  const auto t = read_space(io);
  EXPECT_EQ(t.points, s.points);
  ASSERT_EQ(t.weights.size(), 3u);
  EXPECT_EQ(t.weights[0], Rational(1, 2));
  const auto probs = point_probabilities(t);
  EXPECT_EQ(probs[0b111], Rational(1, 4));
}

TEST(Kwise, MalformedSpaceRejected) {
  std::stringstream io("2 1 2 1\n1 1 1/2\n-1 -1 1/3\n");
  EXPECT_THROW(read_space(io), Error);
}

TEST(GaussianSpace, BinomialSumMomentsMatchGaussian) {
  const GaussianSpace g(2, 3, GaussianMethod::binomial_sum, 33);
  EXPECT_EQ(*g.exact_even_moment(2), 1);
  // E[Z^4] = 3 - 2/N for a normalized sum of N signs.
  EXPECT_EQ(*g.exact_even_moment(4), Rational(3) - Rational(2, 33));
}

TEST(GaussianSpace, EvenBinomialResolutionRejected) {
  EXPECT_THROW(GaussianSpace(2, 2, GaussianMethod::binomial_sum, 32), Error);
}

TEST(GaussianSpace, InverseCdfMarginal) {
  const GaussianSpace g(3, 4, GaussianMethod::inverse_cdf, 1u << 16);
  EXPECT_NEAR(g.marginal_moment(2), 1.0, 1e-3);
  EXPECT_LT(g.marginal_ks_distance(), 1e-4);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t)
    for (double z : g.sample(g.layout().random(rng))) EXPECT_NE(z, 0.0);
}
