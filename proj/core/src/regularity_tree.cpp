#include "ptffool/regularity_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <random>
#include <sstream>

#include "ptffool/hypercube.hpp"

namespace ptffool {

namespace {

constexpr std::size_t kCountBlocks = 16;

Rational dyadic(unsigned depth) {
  Rational q(BigInt(1), BigInt(1) << depth);
  return q;
}

// Pr_space[sgn p = +1], exactly.
Rational positive_mass(const DegTwoPoly& p, const SampleSpace& space) {
  const std::size_t blocks = std::min<std::size_t>(kCountBlocks, std::max<std::size_t>(space.size(), 1));
  std::vector<Rational> part(blocks, 0);
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_blocks(blocks, [&](std::size_t b) {
    const std::size_t lo = space.size() * b / blocks;
    const std::size_t hi = space.size() * (b + 1) / blocks;
    for (std::size_t i = lo; i < hi; ++i) {
      if (exact_sign(p, space.points[i]) < 0) continue;
      if (space.uniform_weights()) ++hits[b];
      else part[b] += space.weights[i];
    }
  });
  Rational total = 0;
  if (space.uniform_weights()) {
    std::uint64_t h = 0;
    for (auto v : hits) h += v;
    total = Rational(BigInt(static_cast<unsigned long>(h)), BigInt(static_cast<unsigned long>(space.size())));
    total.canonicalize();
  } else {
    for (const auto& v : part) total += v;
  }
  return total;
}

bool reaches(const TreeNode& node, PointMask x) { return (x & node.fixed) == node.negative; }

std::string poly_text(const DegTwoPoly& p) {
  std::ostringstream os;
  write_poly(os, p);
  return os.str();
}

}  // namespace

std::string to_string(LeafClass c) {
  switch (c) {
    case LeafClass::regular: return "regular";
    case LeafClass::close_to_constant: return "close_to_constant";
    case LeafClass::bad: return "bad";
  }
  return "unknown";
}

Rational TreeNode::mass() const { return dyadic(depth); }

unsigned DecisionTree::depth() const {
  unsigned d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::vector<std::size_t> DecisionTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].is_leaf()) out.push_back(i);
  return out;
}

unsigned default_tree_depth(double tau) {
  require(tau > 0.0 && tau < 0.5, ErrorKind::invalid_argument, "tau must lie in (0, 1/2)");
  const double l = std::log(1.0 / tau);
  const double shape = std::ceil((1.0 / tau) * (2.0 * l) * (2.0 * l));
  return static_cast<unsigned>(std::min<double>(shape, tolerances().tree_depth_cap));
}

unsigned test_independence(double tau) {
  require(tau > 0.0 && tau < 0.5, ErrorKind::invalid_argument, "tau must lie in (0, 1/2)");
  return static_cast<unsigned>(std::ceil(tolerances().tree_independence_constant * std::log2(1.0 / tau))) + 2;
}

SampleSpace default_test_space(unsigned n, double tau) {
  const unsigned k = test_independence(tau);
  if (k >= n) {
    require(n <= tolerances().exact_max_n, ErrorKind::resource,
            "test space would be the full cube on " + std::to_string(n) + " variables");
    SampleSpace s;
    s.n = n;
    s.k_claimed = n;
    s.points.resize(std::size_t{1} << n);
    for (std::size_t x = 0; x < s.points.size(); ++x) s.points[x] = x;
    return s;
  }
  return build_kwise_bernoulli(n, k, KwiseMethod::bch_parity);
}

LeafClassification classify_leaf(const DegTwoPoly& p_rho, double tau, const SampleSpace& test_space) {
  require(test_space.n == p_rho.n, ErrorKind::invalid_argument, "test space dimension differs from polynomial");
  LeafClassification out;
  const auto inf = influences(p_rho);
  if (inf.total <= 0.0) {
    out.cls = LeafClass::close_to_constant;
    out.constant = exact_sign(p_rho, 0);
    out.disagreement = 0;
    return out;
  }
  if (regularity(p_rho, tau).is_regular) {
    out.cls = LeafClass::regular;
    return out;
  }
  const Rational plus = positive_mass(p_rho, test_space);
  const Rational half(1, 2);
  out.constant = plus >= half ? 1 : -1;
  out.disagreement = out.constant > 0 ? Rational(1 - plus) : plus;
  out.cls = out.disagreement <= to_rational(tau) ? LeafClass::close_to_constant : LeafClass::bad;
  return out;
}

DecisionTree build_tree(const DegTwoPoly& p, double tau, unsigned max_depth) {
  return build_tree(p, tau, max_depth, default_test_space(p.n, tau));
}

DecisionTree build_tree(const DegTwoPoly& p, double tau, unsigned max_depth, const SampleSpace& test_space) {
  require(tau > 0.0 && tau < 0.5, ErrorKind::invalid_argument, "tau must lie in (0, 1/2)");
  require(p.n >= 1 && p.n <= 64, ErrorKind::invalid_argument, "tree needs 1 <= n <= 64");
  DecisionTree tree;
  tree.tau = tau;
  tree.max_depth = max_depth == 0 ? default_tree_depth(tau) : max_depth;
  tree.test_k = test_space.k_claimed;
  const std::size_t budget = std::size_t{1} << tolerances().tree_max_leaves_log2;

  TreeNode root;
  root.poly = p;
  tree.nodes.push_back(std::move(root));
  std::deque<std::size_t> open{0};
  std::size_t leaves = 1;
  while (!open.empty()) {
    const std::size_t id = open.front();
    open.pop_front();
    auto cls = classify_leaf(tree.nodes[id].poly, tau, test_space);
    const bool stop = cls.cls != LeafClass::bad || tree.nodes[id].depth >= tree.max_depth;
    if (stop) {
      tree.nodes[id].leaf = std::move(cls);
      continue;
    }
    if (leaves + 1 > budget) {
      tree.nodes[id].leaf = std::move(cls);
      tree.nodes[id].truncated = true;
      tree.truncated = true;
      continue;
    }
    const auto inf = influences(tree.nodes[id].poly);
    const auto var = static_cast<unsigned>(
        std::max_element(inf.influence.begin(), inf.influence.end()) - inf.influence.begin());
    tree.nodes[id].var = static_cast<int>(var);
    for (int side = 0; side < 2; ++side) {
      const int value = side == 0 ? -1 : 1;
      TreeNode child;
      child.depth = tree.nodes[id].depth + 1;
      child.fixed = tree.nodes[id].fixed | (std::uint64_t{1} << var);
      child.negative = tree.nodes[id].negative | (value < 0 ? std::uint64_t{1} << var : 0);
      child.poly = restrict_variable(tree.nodes[id].poly, var, value);
      tree.nodes.push_back(std::move(child));
      tree.nodes[id].child[side] = static_cast<int>(tree.nodes.size() - 1);
      open.push_back(tree.nodes.size() - 1);
    }
    tree.nodes[id].poly = DegTwoPoly();
    ++leaves;
  }
  return tree;
}

Rational reach_probability(const TreeNode& leaf, const SampleSpace& space) {
  if (space.uniform_weights()) {
    std::uint64_t hits = 0;
    for (auto x : space.points)
      if (reaches(leaf, x)) ++hits;
    Rational q(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(space.size())));
    q.canonicalize();
    return q;
  }
  Rational q = 0;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (reaches(leaf, space.points[i])) q += space.weights[i];
  return q;
}

TreeReport tree_report(const DecisionTree& tree, const DegTwoPoly& p, const SampleSpace* space) {
  TreeReport r;
  r.masses_exact = !tree.truncated;
  const auto leaves = tree.leaves();
  r.leaf_count = leaves.size();
  for (auto cls : {LeafClass::regular, LeafClass::close_to_constant, LeafClass::bad}) r.mass[cls] = 0;
  for (auto id : leaves) {
    const auto& leaf = tree.nodes[id];
    const LeafClass cls = leaf.truncated ? LeafClass::bad : leaf.leaf.cls;
    r.mass[cls] += leaf.mass();
    r.total_mass += leaf.mass();
    ++r.depth_histogram[leaf.depth];
  }
  r.bad_mass = r.mass[LeafClass::bad];
  if (space == nullptr) return r;

  require(space->n == p.n, ErrorKind::invalid_argument, "space dimension differs from polynomial");
  r.space_k = space->k_claimed;
  bool match = true;
  for (auto id : leaves) match = match && reach_probability(tree.nodes[id], *space) == tree.nodes[id].mass();
  r.reach_matches = match;

  if (p.n > tolerances().exact_max_n) return r;
  for (auto cls : {LeafClass::regular, LeafClass::close_to_constant, LeafClass::bad}) r.deviation_by_class[cls] = 0;
  Rational total = 0;
  for (auto id : leaves) {
    const auto& leaf = tree.nodes[id];
    const LeafClass cls = leaf.truncated ? LeafClass::bad : leaf.leaf.cls;
    Rational on_space = 0;
    for (std::size_t i = 0; i < space->size(); ++i) {
      if (!reaches(leaf, space->points[i])) continue;
      on_space += space->weight(i) * exact_sign(p, space->points[i]);
    }
    const auto signs = sign_table(leaf.poly);
    long long s = 0;
    for (auto v : signs) s += v;
    Rational uniform(BigInt(static_cast<long>(s)), BigInt(static_cast<unsigned long>(signs.size())));
    uniform.canonicalize();
    const Rational contribution = on_space - leaf.mass() * uniform;
    r.deviation_by_class[cls] += contribution;
    total += contribution;
  }
  r.deviation_total = total;
  return r;
}

double probe_restrictions(const DecisionTree& tree, const DegTwoPoly& p, unsigned probes, std::uint64_t seed) {
  const auto leaves = tree.leaves();
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = p.n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.n) - 1;
  double worst = 0.0;
  for (unsigned i = 0; i < probes; ++i) {
    const auto& leaf = tree.nodes[leaves[i % leaves.size()]];
    const PointMask x = (rng() & mask & ~leaf.fixed) | leaf.negative;
    worst = std::max(worst, std::abs(leaf.poly.evaluate(x) - p.evaluate(x)));
  }
  return worst;
}

nlohmann::json tree_to_json(const DecisionTree& tree) {
  std::function<nlohmann::json(std::size_t)> emit = [&](std::size_t id) {
    const auto& node = tree.nodes[id];
    nlohmann::json j;
    if (node.is_leaf()) {
      nlohmann::json leaf;
      leaf["class"] = to_string(node.leaf.cls);
      if (node.leaf.cls == LeafClass::close_to_constant) {
        leaf["constant"] = node.leaf.constant;
        leaf["disagreement"] = to_string(node.leaf.disagreement);
      }
      leaf["mass"] = to_string(node.mass());
      leaf["depth"] = node.depth;
      leaf["poly"] = poly_text(node.poly);
      if (node.truncated) leaf["truncated"] = true;
      j["leaf"] = std::move(leaf);
      return j;
    }
    j["var"] = node.var + 1;
    j["neg"] = emit(static_cast<std::size_t>(node.child[0]));
    j["pos"] = emit(static_cast<std::size_t>(node.child[1]));
    return j;
  };
  return emit(0);
}

}  // namespace ptffool
