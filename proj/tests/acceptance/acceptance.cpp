// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ptffool/fooling.hpp"
#include "ptffool/ftmol.hpp"
#include "ptffool/gw.hpp"
#include "ptffool/kwise.hpp"
#include "ptffool/moments.hpp"
#include "ptffool/regularity_tree.hpp"
#include "ptffool/spectral.hpp"

using namespace ptffool;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

DegTwoPoly random_ptf(unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DegTwoPoly p(n);
  p.constant = 0.5 * g(rng);
  for (unsigned i = 0; i < n; ++i) {
    p.linear[i] = g(rng);
    for (unsigned j = i + 1; j < n; ++j) p.add_term(i, j, g(rng));
  }
  return p;
}

SymMatrix random_matrix(unsigned n, std::uint64_t seed, bool trace_free) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SymMatrix a(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j)
      if (i != j || !trace_free) a.set(i, j, g(rng));
  return a;
}

constexpr std::uint64_t kMaster = 20240601;

// Certificates from criteria 2-4, checked by criterion 5.
struct CertLog {
  std::size_t count = 0;
  std::size_t accepted = 0;
  double worst_gap_error = 0.0;

  void add(const DeviationReport& r) {
    for (const auto* c : {&r.upper, &r.lower}) {
      if (!*c) continue;
      ++count;
      if ((*c)->accepted()) ++accepted;
      worst_gap_error = std::max(worst_gap_error, std::abs((*c)->gap.get_d() - (*c)->lp_gap));
    }
  }
};

CertLog g_certs;
std::set<int> g_cert_sources;

Outcome c1_kwise() {
  const unsigned cases[][2] = {{8, 2}, {8, 3}, {16, 4}};
  bool ok = true;
  double slowest = 0.0;
  std::string detail;
  for (const auto& nk : cases)
    for (auto m : {KwiseMethod::vandermonde_bit, KwiseMethod::bch_parity}) {
      const auto t0 = Clock::now();
      const auto s = build_kwise_bernoulli(nk[0], nk[1], m);
      const auto v = verify_kwise_exact(s, nk[1]);
      const double t = seconds_since(t0);
      slowest = std::max(slowest, t);
      ok = ok && v.pass && t < 30.0;
      detail += "(" + std::to_string(nk[0]) + "," + std::to_string(nk[1]) + "," + to_string(m) +
                ":" + std::to_string(s.size()) + ") ";
    }
  return {ok, detail + "slowest " + fmt("%.2f s", slowest)};
}

Outcome c2_collapse() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool sound = true;
  for (unsigned i = 0; i < 20; ++i) {
    const unsigned n = 4 + i % 3;
    const auto r = worst_case_lp(random_ptf(n, derive_seed(kMaster, 200 + i)), n);
    worst = std::max(worst, r.deviation);
    sound = sound && !r.inconclusive;
    g_certs.add(r);
  }
  g_cert_sources.insert(2);
  const double t = seconds_since(t0);
  return {worst <= 1e-7 && sound && t < 60.0,
          "max deviation " + fmt("%.3e", worst) + " over 20 PTFs, " + fmt("%.1f s", t)};
}

Outcome c3_monotone() {
  const auto t0 = Clock::now();
  const double tau = 0.2;
  unsigned found = 0;
  bool ok = true;
  double worst_increase = -1.0;
  std::string kvals;
  for (std::uint64_t stream = 0; found < 10 && stream < 1000; ++stream) {
    const auto p = random_ptf(10, derive_seed(kMaster, 300 + stream));
    if (!regularity(p, tau).is_regular) continue;
    ++found;
    const auto sw = lp_sweep(p, 6);
    ok = ok && sw.monotone;
    for (std::size_t k = 1; k < sw.reports.size(); ++k)
      worst_increase = std::max(worst_increase, sw.reports[k].deviation - sw.reports[k - 1].deviation);
    for (const auto& r : sw.reports) {
      ok = ok && !r.inconclusive;
      g_certs.add(r);
    }
    if (found == 1)
      for (const auto& r : sw.reports) kvals += fmt("%.4f ", r.deviation);
  }
  g_cert_sources.insert(3);
  const double t = seconds_since(t0);
  ok = ok && found == 10 && worst_increase <= 1e-7 && t < 600.0;
  return {ok, std::to_string(found) + " PTFs (tau " + fmt("%.1f", tau) + "-regular), max step " +
                  fmt("%.3e", worst_increase) + ", first: " + kvals + fmt("%.0f s", t)};
}

Outcome c4_hand() {
  DegTwoPoly p(2);
  p.add_term(0, 1, 1.0);
  const auto k1 = worst_case_lp(p, 1);
  const auto k2 = worst_case_lp(p, 2);
  g_certs.add(k1);
  g_certs.add(k2);
  g_cert_sources.insert(4);
  const bool ok = std::abs(k1.deviation - 1.0) <= 1e-9 && std::abs(k2.deviation) <= 1e-9;
  return {ok, "k=1 " + fmt("%.12g", k1.deviation) + ", k=2 " + fmt("%.12g", k2.deviation)};
}

Outcome c5_sandwich() {
  if (g_cert_sources.size() != 3) return {false, "criteria 2-4 must run first"};
  const bool ok = g_certs.count > 0 && g_certs.accepted == g_certs.count && g_certs.worst_gap_error <= 1e-6;
  return {ok, std::to_string(g_certs.accepted) + "/" + std::to_string(g_certs.count) +
                  " certificates exact pointwise, max |gap - lp gap| " + fmt("%.3e", g_certs.worst_gap_error)};
}

Outcome c6_identity() {
  double worst = 0.0;
  for (unsigned i = 0; i < 100; ++i) {
    const unsigned n = 2 + i % 11;
    const auto a = random_matrix(n, derive_seed(kMaster, 600 + i), true);
    DegTwoPoly p(n);
    p.quad = a;
    double off = 0.0;
    for (unsigned x = 0; x < n; ++x)
      for (unsigned y = x + 1; y < n; ++y) off += a(x, y) * a(x, y);
    worst = std::max(worst, std::abs(exact_abs_moments(p, 2)[1] - 4.0 * off));
  }
  return {worst <= 1e-12, "max |E[(x'Ax)^2] - 4 sum A_ij^2| " + fmt("%.3e", worst) + " over 100 matrices"};
}

Outcome c7_eigenbound() {
  const auto t0 = Clock::now();
  const unsigned ks[] = {2, 4, 6, 8};
  double worst = 0.0;
  bool ok = true;
  for (unsigned i = 0; i < 100; ++i) {
    const auto a = random_matrix(2 + i % 11, derive_seed(kMaster, 700 + i), false);
    for (const auto& r : eigenbound_ratios(a, ks)) {
      worst = std::max(worst, r.ratio);
      ok = ok && r.passed;
    }
  }
  const double t = seconds_since(t0);
  return {ok && worst <= 128.0 && t < 600.0, "max ratio " + fmt("%.4f", worst) + " (limit 128), " + fmt("%.1f s", t)};
}

Outcome c8_khintchine() {
  double worst = 0.0;
  bool ok = true;
  for (unsigned i = 0; i < 50; ++i) {
    std::mt19937_64 rng(derive_seed(kMaster, 800 + i));
    std::normal_distribution<double> g;
    std::vector<double> a(1 + i % 12);
    for (auto& v : a) v = g(rng);
    for (unsigned k : {2u, 4u, 6u, 8u}) {
      const auto r = khintchine_check(a, k);
      ok = ok && r.passed;
      worst = std::max(worst, r.ratio);
    }
  }
  return {ok, "max E[(a'x)^k] / (|a|^k k^(k/2)) " + fmt("%.4f", worst)};
}

Outcome c9_ftmol() {
  const auto t0 = Clock::now();
  const auto& tol = tolerances();
  bool ok = true;
  double unit_err = 0.0, xa_err = 0.0, bhat_err = 0.0, half_err = 0.0, l1_ratio = 0.0;
  unsigned inconclusive = 0;
  std::string fits;
  for (unsigned d : {1u, 2u}) {
    for (double c : {1.0, 10.0, 100.0}) {
      const auto u = check_unit_integral(d, c);
      unit_err = std::max(unit_err, u.error);
      ok = ok && u.error <= 1e-3;
    }
    for (unsigned a = 0; a <= 3; ++a)
      for (unsigned b = 0; a + b <= 3 && (d == 2 || b == 0); ++b) {
        const auto r = deriv_l1_norm(d, d == 1 ? MultiIndex{a} : MultiIndex{a, b});
        if (r.inconclusive) ++inconclusive;
        ok = ok && r.passed && !r.inconclusive;
        l1_ratio = std::max(l1_ratio, r.value / r.bound_basic);
      }
    const auto fit = tail_fit(d);
    ok = ok && fit.passed;
    fits += fmt("%.4g", fit.constant) + "/" + fmt("%.4g", fit.golden) + " ";
    for (unsigned a = 0; a <= 4; ++a)
      for (unsigned b = 0; a + b <= 4 && (d == 2 || b == 0); ++b) {
        const auto x = xalpha_b_norm(d, d == 1 ? MultiIndex{a} : MultiIndex{a, b});
        xa_err = std::max(xa_err, x.rel_error);
        ok = ok && x.rel_error <= 1e-6;
      }
    for (double theta : {-0.5, 0.0, 0.7})
      for (double c : {1.0, 10.0, 100.0}) {
        std::vector<double> x(d, 0.0);
        x[0] = theta;
        const auto m = mollify_eval(Region::halfline(d, theta), c, x);
        half_err = std::max(half_err, std::abs(m.value - 0.5));
        ok = ok && !m.inconclusive && std::abs(m.value - 0.5) <= tol.boundary_half_tol;
      }
  }
  for (double rho = 0.0; rho <= 30.0; rho += 0.75) {
    bhat_err = std::max(bhat_err, std::abs(bhat_closed(1, rho) - bhat_quadrature(1, rho)));
  }
  ok = ok && bhat_err <= 1e-8;
  const double t = seconds_since(t0);
  ok = ok && t < 300.0;
  return {ok, "unit " + fmt("%.1e", unit_err) + ", l1/2^|b| " + fmt("%.3f", l1_ratio) + " (" +
                  std::to_string(inconclusive) + " inconclusive), tail fit " + fits + "xalpha " +
                  fmt("%.1e", xa_err) + ", bhat " + fmt("%.1e", bhat_err) + ", boundary " + fmt("%.1e", half_err) +
                  ", " + fmt("%.1f s", t)};
}

Outcome c10_decomposition() {
  unsigned passed = 0;
  for (unsigned i = 0; i < 100; ++i) {
    const auto p = random_ptf(2 + i % 11, derive_seed(kMaster, 1000 + i));
    const double delta = 0.05 + 0.1 * (i % 10);
    if (check_decomposition(spectral_decompose(p, delta), p.quad).all()) ++passed;
  }
  return {passed == 100, std::to_string(passed) + "/100 decompositions satisfy all invariants"};
}

Outcome c11_gw() {
  const auto t0 = Clock::now();
  bool ok = true;
  const Graph edge = Graph::single_edge();
  unsigned spaces = 0;
  unsigned rejected = 0;
  for (unsigned dim : {1u, 2u, 3u}) {
    const auto e = generate_test_embedding(edge, EmbeddingKind::antipodal, dim);
    std::vector<GaussianSpace> gs;
    auto add = [&](unsigned k, GaussianMethod m, std::uint64_t res) {
      try {
        gs.emplace_back(dim, k, m, res);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::configuration) throw;
        ++rejected;
      }
    };
    for (unsigned k : {1u, 2u, 4u})
      for (std::uint64_t q : {std::uint64_t{16}, std::uint64_t{256}, std::uint64_t{1} << 16})
        add(k, GaussianMethod::inverse_cdf, q);
    for (unsigned k : {1u, 2u, 4u})
      for (std::uint64_t N : {16u, 17u, 33u, 101u}) add(k, GaussianMethod::binomial_sum, N);
    for (const auto& s : gs) {
      const bool exhaustive = s.seed_bits() <= 16;
      const auto r = round_with_space(edge, e, s, 2000, derive_seed(kMaster, 1100 + spaces), exhaustive);
      ok = ok && r.min_cut == 1.0 && r.max_cut == 1.0;
      ++spaces;
    }
  }
  const Graph c5 = Graph::cycle(5);
  const auto opt = generate_test_embedding(c5, EmbeddingKind::cycle_optimal);
  const double exact = expected_cut_exact(c5, opt);
  ok = ok && std::abs(exact - 4.0) <= 1e-9;
  const unsigned k = default_gw_k(0.05);
  const GaussianSpace space(opt.dim, k, GaussianMethod::inverse_cdf, std::uint64_t{1} << 20);
  const auto r = round_with_space(c5, opt, space, 100000, derive_seed(kMaster, 1190));
  ok = ok && std::abs(r.diff) <= 0.25 + 3.0 * r.std_error;
  // Same check on a non-degenerate embedding of C5 in R^3.
  const auto rnd = generate_test_embedding(c5, EmbeddingKind::random_unit, 3, derive_seed(kMaster, 1191));
  const GaussianSpace space3(3, k, GaussianMethod::inverse_cdf, std::uint64_t{1} << 20);
  const auto r3 = round_with_space(c5, rnd, space3, 100000, derive_seed(kMaster, 1192));
  ok = ok && std::abs(r3.diff) <= 0.25 + 3.0 * r3.std_error;
  const double t = seconds_since(t0);
  ok = ok && t < 300.0;
  return {ok, "antipodal cut 1 on " + std::to_string(spaces) + " spaces (" + std::to_string(rejected) +
                  " invalid configurations rejected); C5 exact " + fmt("%.12f", exact) + "; k=" +
                  std::to_string(k) + " mean " + fmt("%.4f", r.mean_cut) + " (sigma " + fmt("%.1e", r.std_error) +
                  "), random embedding diff " + fmt("%.4f", r3.diff) + " (sigma " + fmt("%.1e", r3.std_error) +
                  "); " + fmt("%.1f s", t)};
}

Outcome c12_tree() {
  struct Instance {
    DegTwoPoly p;
    double tau;
  };
  std::vector<Instance> golden;
  {
    DegTwoPoly p(2);
    p.add_term(0, 1, 1.0);
    golden.push_back({p, 0.4});
  }
  {
    DegTwoPoly p(4);
    p.add_term(0, 1, 1.0);
    p.add_term(2, 3, 0.05);
    golden.push_back({p, 0.1});
  }
  {
    DegTwoPoly p(8);
    p.linear = {16, 8, 4, 2, 1, 0.5, 0.25, 0.125};
    golden.push_back({p, 0.1});
  }
  {
    DegTwoPoly p(10);
    p.linear[0] = 3.0;
    for (unsigned i = 1; i < 10; ++i)
      for (unsigned j = i + 1; j < 10; ++j) p.add_term(i, j, ((i * j) % 3 == 0) ? -0.3 : 0.3);
    golden.push_back({p, 0.2});
  }
  golden.push_back({random_ptf(9, derive_seed(kMaster, 1200)), 0.15});
  bool ok = true;
  std::string detail;
  for (const auto& g : golden) {
    const auto tree = build_tree(g.p, g.tau);
    const unsigned k = std::max(1u, std::min(g.p.n, tree.depth()));
    const auto space = build_kwise_bernoulli(g.p.n, k, KwiseMethod::bch_parity);
    const auto rep = tree_report(tree, g.p, &space);
    ok = ok && !tree.truncated && rep.total_mass == 1 && rep.reach_matches.value_or(false) &&
         rep.bad_mass <= to_rational(g.tau);
    detail += "n=" + std::to_string(g.p.n) + " depth " + std::to_string(tree.depth()) + " leaves " +
              std::to_string(rep.leaf_count) + " bad " + to_string(rep.bad_mass) + "; ";
  }
  return {ok, detail};
}

Outcome c13_replay() {
  namespace fs = std::filesystem;
  using cli::json;
  const fs::path dir = fs::temp_directory_path() / "ptffool_acceptance";
  fs::create_directories(dir);
  const auto poly = (dir / "p.poly").string();
  std::ofstream(poly) << "4\nC 0.1\nL 1 0.5\nQ 1 2 1\nQ 3 4 0.7\nQ 2 3 -0.3\n";
  const std::vector<json> configs = {
      cli::make_config("fool lp", {{"poly", poly}, {"k", 2}, {"permutation_seed", 5}}, 1),
      cli::make_config("moments", {{"poly", poly}, {"k", {2, 4}}, {"mode", "mc"}, {"samples", 20000}}, 2),
      cli::make_config("gw round", {{"cycle", 7}, {"generate", "random_unit"}, {"dim", 3}, {"trials", 20000}}, 3),
      cli::make_config("tree build", {{"poly", poly}, {"tau", 0.2}}, 4),
      cli::make_config("kwise build", {{"n", 8}, {"k", 3}}, 5, {{"out", (dir / "s.space").string()}}),
      cli::make_config("fool sweep", {{"poly", poly}, {"kmax", 3}}, 6, {{"csv", (dir / "s.csv").string()}}),
      cli::make_config("ftmol check", {{"d", 1}, {"suite", {"tail", "moment"}}}, 7),
  };
  unsigned same = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto first = cli::run(configs[i]);
    const auto path = (dir / ("report" + std::to_string(i) + ".json")).string();
    std::ofstream(path) << first.report.dump(2) << "\n";
    const auto second = cli::run(cli::load_config(path));
    auto a = first.report, b = second.report;
    a.erase("timestamp");
    b.erase("timestamp");
    if (a.dump(2) == b.dump(2)) ++same;
  }
  return {same == configs.size(),
          std::to_string(same) + "/" + std::to_string(configs.size()) + " replays byte-identical"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  const std::vector<Criterion> all = {
      {1, "k-wise exactness", c1_kwise},
      {2, "full-independence collapse", c2_collapse},
      {3, "LP monotonicity", c3_monotone},
      {4, "hand-verifiable LP values", c4_hand},
      {5, "sandwich soundness", c5_sandwich},
      {6, "moment identity", c6_identity},
      {7, "eigenbound constant", c7_eigenbound},
      {8, "Khintchine", c8_khintchine},
      {9, "FT-mollification suite", c9_ftmol},
      {10, "decomposition invariants", c10_decomposition},
      {11, "GW rounding", c11_gw},
      {12, "restriction tree", c12_tree},
      {13, "determinism", c13_replay},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  if (selected.contains(5)) selected.insert({2, 3, 4});
  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s  %2d  %-28s %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
