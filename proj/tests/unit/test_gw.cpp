#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ptffool/gw.hpp"

using namespace ptffool;

TEST(Gw, AntipodalEdgeAlwaysCut) {
  const Graph g = Graph::single_edge();
  for (unsigned dim : {1u, 3u}) {
    const auto e = generate_test_embedding(g, EmbeddingKind::antipodal, dim);
    EXPECT_DOUBLE_EQ(e.inner(0, 1), -1.0);
    const GaussianSpace inv(dim, 2, GaussianMethod::inverse_cdf, 1u << 8);
    const auto a = round_with_space(g, e, inv, 0, 1, true);
    EXPECT_EQ(a.min_cut, 1.0);
    EXPECT_EQ(a.mean_cut, 1.0);
    const GaussianSpace bin(dim, 2, GaussianMethod::binomial_sum, 17);
    const auto b = round_with_space(g, e, bin, 5000, 2);
    EXPECT_EQ(b.min_cut, 1.0);
    EXPECT_EQ(b.mean_cut, 1.0);
  }
}

TEST(Gw, CycleOptimalExpectedCut) {
  const Graph c5 = Graph::cycle(5);
  const auto e = generate_test_embedding(c5, EmbeddingKind::cycle_optimal);
  EXPECT_NEAR(expected_cut_exact(c5, e), 4.0, 1e-9);
  // Every C5 edge spans angle 4 pi / 5.
  for (const auto& ed : c5.edges) EXPECT_NEAR(std::acos(e.inner(ed.u, ed.v)), 0.8 * std::numbers::pi, 1e-12);
  const Graph c7 = Graph::cycle(7);
  EXPECT_NEAR(expected_cut_exact(c7, generate_test_embedding(c7, EmbeddingKind::cycle_optimal)), 6.0, 1e-9);
}

TEST(Gw, CutValueBySign) {
  Graph g;
  g.vertices = 3;
  g.edges = {{0, 1, 1.0}, {1, 2, 2.0}};
  Embedding e;
  e.dim = 2;
  e.vectors = {{1, 0}, {0, 1}, {-1, 0}};
  const std::vector<double> r{1.0, -1.0};
  EXPECT_EQ(cut_value(g, e, r), 1.0);  // signs +, -, -
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(cut_value(g, e, zero), 0.0);
}

TEST(Gw, RandomEmbeddingMatchesIndependentRounding) {
  Graph g;
  g.vertices = 6;
  for (unsigned i = 0; i < 6; ++i)
    for (unsigned j = i + 1; j < 6; ++j) g.edges.push_back({i, j, 1.0 + (i + j) % 3});
  const auto e = generate_test_embedding(g, EmbeddingKind::random_unit, 4, 3);
  const auto ind = round_independent(g, e, 40000, 5);
  EXPECT_LE(std::abs(ind.diff), 4.0 * ind.std_error + 1e-12);
  const GaussianSpace s(4, 64, GaussianMethod::inverse_cdf, 1u << 20);
  const auto kw = round_with_space(g, e, s, 40000, 6);
  EXPECT_LE(std::abs(kw.diff), 4.0 * kw.std_error + 0.05 * g.total_weight());
}

TEST(Gw, DefaultK) { EXPECT_EQ(default_gw_k(0.05), 1600u); }

TEST(Gw, FileFormats) {
  std::stringstream gs("# triangle\n0 1\n1 2 2.5\n2 0\n");
  const auto g = read_graph(gs);
  EXPECT_EQ(g.vertices, 3u);
  EXPECT_DOUBLE_EQ(g.total_weight(), 4.5);
  std::stringstream es("0 2 0.6 0.8\n1 2 1 0\n2 2 0 -1\n");
  const auto e = read_embedding(es);
  EXPECT_NEAR(e.inner(0, 1), 0.6, 1e-15);
  std::stringstream bad("0 2 0.5 0.5\n");
  EXPECT_THROW(read_embedding(bad), Error);
  std::stringstream loop("1 1\n");
  EXPECT_THROW(read_graph(loop), Error);
}
