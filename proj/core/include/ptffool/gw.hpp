#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ptffool/kwise.hpp"

namespace ptffool {

/// Undirected graph with 0-based vertex ids.
struct Graph {
  struct Edge {
    unsigned u = 0;
    unsigned v = 0;
    double w = 1.0;
  };
  unsigned vertices = 0;
  std::vector<Edge> edges;

  double total_weight() const;
  // No self-loops, finite non-negative weights, ids below `vertices`.
  void validate() const;

  static Graph cycle(unsigned n);
  static Graph single_edge();
};

// `u v [w]` per line; `#` starts a comment.
Graph read_graph(std::istream& is);
Graph load_graph(const std::string& path);
void write_graph(std::ostream& os, const Graph& g);

/// Unit vectors x_u in R^dim, one per vertex.
struct Embedding {
  unsigned dim = 0;
  std::vector<std::vector<double>> vectors;

  double inner(unsigned u, unsigned v) const;
  // Throws with the vertex id when | |x_u| - 1 | exceeds gw_unit_norm.
  void validate() const;
};

// `v dim c_1 ... c_dim` per line. Vectors within gw_unit_norm of unit
// length are renormalized.
Embedding read_embedding(std::istream& is);
Embedding load_embedding(const std::string& path);
void write_embedding(std::ostream& os, const Embedding& e);

enum class EmbeddingKind { antipodal, cycle_optimal, random_unit };

std::string to_string(EmbeddingKind k);
EmbeddingKind parse_embedding_kind(const std::string& name);

/// antipodal: a proper 2-colouring mapped to +-e_1 (bipartite graphs only).
/// cycle_optimal: vertex i at angle i * pi (n-1)/n in the plane, so cycle
/// neighbours sit at angle pi (n-1)/n (n odd). random_unit: seeded
/// normalized Gaussian vectors in R^dim.
Embedding generate_test_embedding(const Graph& g, EmbeddingKind kind, unsigned dim = 2,
                                  std::uint64_t seed = 0);

// sum_edges w_uv arccos(<x_u, x_v>) / pi
double expected_cut_exact(const Graph& g, const Embedding& e);

// Weight of edges with sgn<x_u, r> != sgn<x_v, r>, sgn(0) = +1.
double cut_value(const Graph& g, const Embedding& e, std::span<const double> r);

// ceil(gw_k_constant / eps^2)
unsigned default_gw_k(double eps);

enum class RoundingMode { monte_carlo, exhaustive, independent };

std::string to_string(RoundingMode m);

struct RoundingReport {
  RoundingMode mode = RoundingMode::monte_carlo;
  std::uint64_t trials = 0;  // samples or seeds enumerated
  std::uint64_t seed = 0;
  double mean_cut = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // 95%
  double ci_high = 0.0;
  double min_cut = 0.0;
  double max_cut = 0.0;
  double exact = 0.0;    // expected_cut_exact
  double diff = 0.0;     // mean_cut - exact
};

/// Hyperplane rounding with r drawn from a Gaussian space: `trials` random
/// seeds, or every seed when `exhaustive` is set.
RoundingReport round_with_space(const Graph& g, const Embedding& e, const GaussianSpace& space,
                                std::uint64_t trials, std::uint64_t seed, bool exhaustive = false);

// Reference mode with fully independent standard Gaussians.
RoundingReport round_independent(const Graph& g, const Embedding& e, std::uint64_t trials,
                                 std::uint64_t seed);

}  // namespace ptffool
