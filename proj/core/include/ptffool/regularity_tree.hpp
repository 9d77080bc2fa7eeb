#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptffool/kwise.hpp"
#include "ptffool/poly.hpp"

namespace ptffool {

enum class LeafClass { regular, close_to_constant, bad };

std::string to_string(LeafClass c);

struct LeafClassification {
  LeafClass cls = LeafClass::bad;
  int constant = 1;        // b for close_to_constant
  Rational disagreement;   // Pr_test[sgn p != b]
};

/// Restriction decision tree stored as a flat node array; node 0 is the
/// root. Internal nodes branch on one variable, child[0] for x = -1 and
/// child[1] for x = +1.
struct TreeNode {
  int var = -1;                 // -1 at leaves
  int child[2] = {-1, -1};
  unsigned depth = 0;
  std::uint64_t fixed = 0;      // variables assigned on the path
  std::uint64_t negative = 0;   // of those, the ones set to -1
  // leaves only
  LeafClassification leaf;
  DegTwoPoly poly;
  bool truncated = false;       // cut by the leaf budget, not classified

  bool is_leaf() const { return var < 0; }
  Rational mass() const;        // 2^-depth
};

struct DecisionTree {
  double tau = 0.0;
  unsigned max_depth = 0;
  unsigned test_k = 0;
  std::vector<TreeNode> nodes;
  bool truncated = false;

  unsigned depth() const;
  std::vector<std::size_t> leaves() const;
};

// min(ceil((1/tau) (2 ln(1/tau))^2), tree_depth_cap)
unsigned default_tree_depth(double tau);
// ceil(c log2(1/tau)) + 2 with c = tree_independence_constant.
unsigned test_independence(double tau);

// BCH space of order test_independence(tau) (the full cube when that
// reaches n).
SampleSpace default_test_space(unsigned n, double tau);

LeafClassification classify_leaf(const DegTwoPoly& p_rho, double tau, const SampleSpace& test_space);

/// Splits on the most influential variable (lowest index on ties) until a
/// node is regular, close to constant, or at max_depth (bad). max_depth 0
/// selects default_tree_depth(tau).
DecisionTree build_tree(const DegTwoPoly& p, double tau, unsigned max_depth = 0);
DecisionTree build_tree(const DegTwoPoly& p, double tau, unsigned max_depth, const SampleSpace& test_space);

// Pr[x reaches leaf] under a space, exactly.
Rational reach_probability(const TreeNode& leaf, const SampleSpace& space);

struct TreeReport {
  std::map<LeafClass, Rational> mass;   // by class
  Rational total_mass;
  Rational bad_mass;
  std::map<unsigned, std::size_t> depth_histogram;
  std::size_t leaf_count = 0;
  bool masses_exact = true;             // false for truncated trees
  // Supplied space only
  std::optional<bool> reach_matches;    // every leaf reached with prob 2^-depth
  std::optional<unsigned> space_k;
  // E_space[sgn p] - E_U[sgn p] split by the class of the leaf reached
  std::map<LeafClass, Rational> deviation_by_class;
  std::optional<Rational> deviation_total;
};

TreeReport tree_report(const DecisionTree& tree, const DegTwoPoly& p,
                       const SampleSpace* space = nullptr);

// Max |p_rho(x) - p(x)| over random x agreeing with each leaf's path.
double probe_restrictions(const DecisionTree& tree, const DegTwoPoly& p, unsigned probes,
                          std::uint64_t seed);

// Nested {var, neg, pos} / {leaf: {class, poly, mass, ...}}, 1-based vars.
nlohmann::json tree_to_json(const DecisionTree& tree);

}  // namespace ptffool
