#include "ptffool/gw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

namespace ptffool {

namespace {

constexpr std::size_t kBlocks = 64;

struct Accumulator {
  DoubleDouble sum;
  DoubleDouble sumsq;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::uint64_t count = 0;

  void add(double v) {
    sum.add(v);
    sumsq.add(v * v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++count;
  }
  void merge(const Accumulator& o) {
    sum.add(o.sum);
    sumsq.add(o.sumsq);
    lo = std::min(lo, o.lo);
    hi = std::max(hi, o.hi);
    count += o.count;
  }
};

RoundingReport summarize(const Accumulator& acc, RoundingMode mode, double exact, std::uint64_t seed) {
  RoundingReport r;
  r.mode = mode;
  r.trials = acc.count;
  r.seed = seed;
  const double n = static_cast<double>(acc.count);
  r.mean_cut = acc.sum.value() / n;
  const double var = acc.count > 1 ? std::max(0.0, (acc.sumsq.value() - n * r.mean_cut * r.mean_cut) / (n - 1)) : 0.0;
  r.std_error = mode == RoundingMode::exhaustive ? 0.0 : std::sqrt(var / n);
  r.ci_low = r.mean_cut - 1.959963984540054 * r.std_error;
  r.ci_high = r.mean_cut + 1.959963984540054 * r.std_error;
  r.min_cut = acc.lo;
  r.max_cut = acc.hi;
  r.exact = exact;
  r.diff = r.mean_cut - exact;
  return r;
}

void check_pair(const Graph& g, const Embedding& e) {
  g.validate();
  require(e.vectors.size() == g.vertices, ErrorKind::invalid_argument,
          "embedding has " + std::to_string(e.vectors.size()) + " vectors for " + std::to_string(g.vertices) +
              " vertices");
}

int side(const std::vector<double>& x, std::span<const double> r) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * r[i];
  return s < 0.0 ? -1 : 1;
}

}  // namespace

double Graph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.w;
  return s;
}

void Graph::validate() const {
  for (const auto& e : edges) {
    require(e.u < vertices && e.v < vertices, ErrorKind::invalid_argument, "edge endpoint out of range");
    require(e.u != e.v, ErrorKind::invalid_argument, "self-loop at vertex " + std::to_string(e.u));
    require(std::isfinite(e.w) && e.w >= 0.0, ErrorKind::invalid_argument,
            "edge weight must be finite and non-negative");
  }
}

Graph Graph::cycle(unsigned n) {
  require(n >= 3, ErrorKind::invalid_argument, "cycle needs n >= 3");
  Graph g;
  g.vertices = n;
  for (unsigned i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, 1.0});
  return g;
}

Graph Graph::single_edge() {
  Graph g;
  g.vertices = 2;
  g.edges.push_back({0, 1, 1.0});
  return g;
}

Graph read_graph(std::istream& is) {
  Graph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    long u = 0;
    long v = 0;
    if (!(ls >> u)) continue;
    if (!(ls >> v) || u < 0 || v < 0)
      fail(ErrorKind::parse, "graph line " + std::to_string(lineno) + ": expected `u v [w]`");
    double w = 1.0;
    if (!(ls >> w)) {
      if (!ls.eof()) fail(ErrorKind::parse, "graph line " + std::to_string(lineno) + ": bad weight");
      w = 1.0;
    }
    g.edges.push_back({static_cast<unsigned>(u), static_cast<unsigned>(v), w});
    g.vertices = std::max<unsigned>(g.vertices, static_cast<unsigned>(std::max(u, v)) + 1);
  }
  g.validate();
  return g;
}

Graph load_graph(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::resource, "cannot read " + path);
  return read_graph(is);
}

void write_graph(std::ostream& os, const Graph& g) {
  os << std::setprecision(17);
  for (const auto& e : g.edges) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

double Embedding::inner(unsigned u, unsigned v) const {
  double s = 0.0;
  for (unsigned i = 0; i < dim; ++i) s += vectors[u][i] * vectors[v][i];
  return s;
}

void Embedding::validate() const {
  for (std::size_t u = 0; u < vectors.size(); ++u) {
    require(vectors[u].size() == dim, ErrorKind::invalid_argument,
            "vertex " + std::to_string(u) + " has the wrong dimension");
    double s = 0.0;
    for (double c : vectors[u]) s += c * c;
    require(std::abs(std::sqrt(s) - 1.0) <= tolerances().gw_unit_norm, ErrorKind::invalid_argument,
            "vertex " + std::to_string(u) + " is not a unit vector");
  }
}

Embedding read_embedding(std::istream& is) {
  Embedding e;
  std::vector<bool> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    std::istringstream ls(line);
    long v = 0;
    if (!(ls >> v)) continue;
    unsigned dim = 0;
    auto bad = [&](const std::string& what) {
      fail(ErrorKind::parse, "embedding line " + std::to_string(lineno) + ": " + what);
    };
    if (v < 0 || !(ls >> dim) || dim == 0) bad("expected `v dim c_1 ... c_dim`");
    if (e.dim == 0) e.dim = dim;
    if (dim != e.dim) bad("dimension differs from earlier lines");
    std::vector<double> x(dim);
    for (auto& c : x)
      if (!(ls >> c)) bad("too few coordinates");
    const auto id = static_cast<std::size_t>(v);
    if (id >= e.vectors.size()) {
      e.vectors.resize(id + 1);
      seen.resize(id + 1, false);
    }
    if (seen[id]) bad("vertex " + std::to_string(id) + " repeated");
    seen[id] = true;
    e.vectors[id] = std::move(x);
  }
  for (std::size_t u = 0; u < seen.size(); ++u)
    require(seen[u], ErrorKind::parse, "embedding: vertex " + std::to_string(u) + " missing");
  e.validate();
  for (auto& x : e.vectors) {
    double s = 0.0;
    for (double c : x) s += c * c;
    const double norm = std::sqrt(s);
    for (auto& c : x) c /= norm;
  }
  return e;
}

Embedding load_embedding(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::resource, "cannot read " + path);
  return read_embedding(is);
}

void write_embedding(std::ostream& os, const Embedding& e) {
  os << std::setprecision(17);
  for (std::size_t u = 0; u < e.vectors.size(); ++u) {
    os << u << ' ' << e.dim;
    for (double c : e.vectors[u]) os << ' ' << c;
    os << '\n';
  }
}

std::string to_string(EmbeddingKind k) {
  switch (k) {
    case EmbeddingKind::antipodal: return "antipodal";
    case EmbeddingKind::cycle_optimal: return "cycle_optimal";
    case EmbeddingKind::random_unit: return "random_unit";
  }
  return "unknown";
}

EmbeddingKind parse_embedding_kind(const std::string& name) {
  if (name == "antipodal") return EmbeddingKind::antipodal;
  if (name == "cycle_optimal") return EmbeddingKind::cycle_optimal;
  if (name == "random_unit") return EmbeddingKind::random_unit;
  fail(ErrorKind::invalid_argument, "unknown embedding kind: " + name);
}

Embedding generate_test_embedding(const Graph& g, EmbeddingKind kind, unsigned dim, std::uint64_t seed) {
  g.validate();
  Embedding e;
  switch (kind) {
    case EmbeddingKind::antipodal: {
      require(dim >= 1, ErrorKind::invalid_argument, "dimension must be >= 1");
      e.dim = dim;
      std::vector<std::vector<unsigned>> adj(g.vertices);
      for (const auto& ed : g.edges) {
        adj[ed.u].push_back(ed.v);
        adj[ed.v].push_back(ed.u);
      }
      std::vector<int> colour(g.vertices, 0);
      for (unsigned s = 0; s < g.vertices; ++s) {
        if (colour[s] != 0) continue;
        colour[s] = 1;
        std::queue<unsigned> q;
        q.push(s);
        while (!q.empty()) {
          const unsigned u = q.front();
          q.pop();
          for (unsigned v : adj[u]) {
            if (colour[v] == 0) {
              colour[v] = -colour[u];
              q.push(v);
            }
            require(colour[v] != colour[u], ErrorKind::invalid_argument,
                    "antipodal embedding needs a bipartite graph");
          }
        }
      }
      for (unsigned u = 0; u < g.vertices; ++u) {
        std::vector<double> x(dim, 0.0);
        x[0] = colour[u];
        e.vectors.push_back(std::move(x));
      }
      break;
    }
    case EmbeddingKind::cycle_optimal: {
      require(dim >= 2, ErrorKind::invalid_argument, "cycle embedding needs dim >= 2");
      e.dim = dim;
      const double step = std::numbers::pi * (g.vertices - 1.0) / g.vertices;
      for (unsigned u = 0; u < g.vertices; ++u) {
        std::vector<double> x(dim, 0.0);
        x[0] = std::cos(step * u);
        x[1] = std::sin(step * u);
        e.vectors.push_back(std::move(x));
      }
      break;
    }
    case EmbeddingKind::random_unit: {
      require(dim >= 1, ErrorKind::invalid_argument, "dimension must be >= 1");
      e.dim = dim;
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss;
      for (unsigned u = 0; u < g.vertices; ++u) {
        std::vector<double> x(dim);
        double s = 0.0;
        do {
          s = 0.0;
          for (auto& c : x) {
            c = gauss(rng);
            s += c * c;
          }
        } while (s == 0.0);
        for (auto& c : x) c /= std::sqrt(s);
        e.vectors.push_back(std::move(x));
      }
      break;
    }
  }
  return e;
}

double expected_cut_exact(const Graph& g, const Embedding& e) {
  check_pair(g, e);
  double s = 0.0;
  for (const auto& ed : g.edges) {
    const double c = std::clamp(e.inner(ed.u, ed.v), -1.0, 1.0);
    s += ed.w * std::acos(c) / std::numbers::pi;
  }
  return s;
}

double cut_value(const Graph& g, const Embedding& e, std::span<const double> r) {
  require(r.size() == e.dim, ErrorKind::invalid_argument, "rounding vector dimension mismatch");
  std::vector<int> sides(e.vectors.size());
  for (std::size_t u = 0; u < sides.size(); ++u) sides[u] = side(e.vectors[u], r);
  double s = 0.0;
  for (const auto& ed : g.edges)
    if (sides[ed.u] != sides[ed.v]) s += ed.w;
  return s;
}

unsigned default_gw_k(double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorKind::invalid_argument, "eps must lie in (0, 1)");
  return static_cast<unsigned>(std::ceil(tolerances().gw_k_constant / (eps * eps)));
}

std::string to_string(RoundingMode m) {
  switch (m) {
    case RoundingMode::monte_carlo: return "monte_carlo";
    case RoundingMode::exhaustive: return "exhaustive";
    case RoundingMode::independent: return "independent";
  }
  return "unknown";
}

RoundingReport round_with_space(const Graph& g, const Embedding& e, const GaussianSpace& space,
                                std::uint64_t trials, std::uint64_t seed, bool exhaustive) {
  check_pair(g, e);
  require(space.n() == e.dim, ErrorKind::invalid_argument,
          "Gaussian space dimension " + std::to_string(space.n()) + " differs from embedding dimension " +
              std::to_string(e.dim));
  const double exact = expected_cut_exact(g, e);
  std::uint64_t count = trials;
  if (exhaustive) {
    require(space.seed_bits() < 63 && (std::uint64_t{1} << space.seed_bits()) <= tolerances().support_budget,
            ErrorKind::resource, "seed space of " + std::to_string(space.seed_bits()) + " bits exceeds budget");
    count = std::uint64_t{1} << space.seed_bits();
  }
  require(count > 0, ErrorKind::invalid_argument, "trials must be positive");
  std::vector<Accumulator> acc(kBlocks);
  parallel_blocks(kBlocks, [&](std::size_t b) {
    const std::uint64_t lo = count * b / kBlocks;
    const std::uint64_t hi = count * (b + 1) / kBlocks;
    std::mt19937_64 rng(derive_seed(seed, b));
    std::vector<double> r;
    for (std::uint64_t t = lo; t < hi; ++t) {
      const Seed s = exhaustive ? space.layout().from_index(t) : space.layout().random(rng);
      space.sample(s, r);
      acc[b].add(cut_value(g, e, r));
    }
  });
  Accumulator total;
  for (const auto& a : acc)
    if (a.count > 0) total.merge(a);
  return summarize(total, exhaustive ? RoundingMode::exhaustive : RoundingMode::monte_carlo, exact, seed);
}

RoundingReport round_independent(const Graph& g, const Embedding& e, std::uint64_t trials, std::uint64_t seed) {
  check_pair(g, e);
  require(trials > 0, ErrorKind::invalid_argument, "trials must be positive");
  const double exact = expected_cut_exact(g, e);
  std::vector<Accumulator> acc(kBlocks);
  parallel_blocks(kBlocks, [&](std::size_t b) {
    const std::uint64_t lo = trials * b / kBlocks;
    const std::uint64_t hi = trials * (b + 1) / kBlocks;
    std::mt19937_64 rng(derive_seed(seed, b));
    std::normal_distribution<double> gauss;
    std::vector<double> r(e.dim);
    for (std::uint64_t t = lo; t < hi; ++t) {
      for (auto& c : r) c = gauss(rng);
      acc[b].add(cut_value(g, e, r));
    }
  });
  Accumulator total;
  for (const auto& a : acc)
    if (a.count > 0) total.merge(a);
  return summarize(total, RoundingMode::independent, exact, seed);
}

}  // namespace ptffool
