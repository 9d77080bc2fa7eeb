#include <gtest/gtest.h>

#include "helpers.hpp"
#include "ptffool/hypercube.hpp"
#include "ptffool/regularity_tree.hpp"

using namespace ptffool;
using ptffool::test::random_poly;

TEST(Tree, ProductGolden) {
  DegTwoPoly p(2);
  p.add_term(0, 1, 1.0);
  const auto t = build_tree(p, 0.4);
  EXPECT_EQ(t.max_depth, 9u);
  EXPECT_EQ(t.depth(), 2u);
  const auto leaves = t.leaves();
  ASSERT_EQ(leaves.size(), 4u);
  for (auto i : leaves) {
    EXPECT_EQ(t.nodes[i].mass(), Rational(1, 4));
    EXPECT_EQ(t.nodes[i].leaf.cls, LeafClass::close_to_constant);
  }
}

TEST(Tree, DefaultDepthFormula) {
  EXPECT_EQ(default_tree_depth(0.4), 9u);  // ceil(2.5 * (2 ln 2.5)^2) = ceil(8.39)
  EXPECT_EQ(default_tree_depth(0.01), tolerances().tree_depth_cap);
  EXPECT_EQ(test_independence(0.25), 6u);
}

TEST(Tree, MassesAndReachProbabilities) {
  for (unsigned s = 0; s < 5; ++s) {
    const auto p = random_poly(8, 500 + s);
    const auto t = build_tree(p, 0.2, 4);
    const auto space = build_kwise_bernoulli(8, std::max(1u, t.depth()), KwiseMethod::bch_parity);
    const auto rep = tree_report(t, p, &space);
    EXPECT_EQ(rep.total_mass, 1);
    ASSERT_TRUE(rep.reach_matches);
    EXPECT_TRUE(*rep.reach_matches);
    // Brute-force reach probability of every leaf under the space.
    for (auto i : t.leaves()) {
      Rational reach;
      for (std::size_t j = 0; j < space.size(); ++j)
        if ((space.points[j] & t.nodes[i].fixed) == t.nodes[i].negative) reach += space.weight(j);
      EXPECT_EQ(reach, t.nodes[i].mass());
      EXPECT_EQ(reach_probability(t.nodes[i], space), reach);
    }
  }
}

TEST(Tree, LeafPolynomialsAreRestrictions) {
  const auto p = random_poly(7, 9);
  const auto t = build_tree(p, 0.2, 3);
  EXPECT_LE(probe_restrictions(t, p, 50, 1), 1e-12);
  for (auto i : t.leaves()) {
    const auto& node = t.nodes[i];
    for (std::uint64_t x = 0; x < 128; ++x) {
      if ((x & node.fixed) != node.negative) continue;
      EXPECT_NEAR(node.poly.evaluate(PointMask{x}), p.evaluate(PointMask{x}), 1e-12);
    }
  }
}

TEST(Tree, BadMassBoundedOnGoldenSet) {
  DegTwoPoly a(4);
  a.add_term(0, 1, 1.0);
  a.add_term(2, 3, 0.05);
  DegTwoPoly b(6);
  b.linear = {4, 2, 1, 0.5, 0.25, 0.125};
  for (const auto& p : {a, b}) {
    const double tau = 0.1;
    const auto t = build_tree(p, tau);
    const auto rep = tree_report(t, p);
    EXPECT_FALSE(t.truncated);
    EXPECT_LE(rep.bad_mass, to_rational(tau));
  }
}

TEST(Tree, JsonShape) {
  DegTwoPoly p(2);
  p.add_term(0, 1, 1.0);
  const auto j = tree_to_json(build_tree(p, 0.4));
  EXPECT_EQ(j["var"], 1);
  EXPECT_TRUE(j["neg"].contains("var"));
  EXPECT_TRUE(j["neg"]["neg"].contains("leaf"));
  EXPECT_EQ(j["neg"]["neg"]["leaf"]["class"], "close_to_constant");
}
