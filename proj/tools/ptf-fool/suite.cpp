#include <cmath>
#include <functional>
#include <random>

#include "commands.hpp"
#include "ptffool/fooling.hpp"
#include "ptffool/ftmol.hpp"
#include "ptffool/gw.hpp"
#include "ptffool/kwise.hpp"
#include "ptffool/moments.hpp"
#include "ptffool/regularity_tree.hpp"
#include "ptffool/spectral.hpp"

namespace ptffool::cli {

namespace {

DegTwoPoly random_poly(unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DegTwoPoly p(n);
  p.constant = 0.25 * g(rng);
  for (unsigned i = 0; i < n; ++i) p.linear[i] = g(rng);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) p.add_term(i, j, g(rng));
  return p;
}

SymMatrix random_trace_free(unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SymMatrix a(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i + 1; j < n; ++j) a.set(i, j, g(rng));
  return a;
}

struct Checks {
  json list = json::array();
  bool ok = true;

  void add(const std::string& name, bool passed, json detail = json::object()) {
    detail["name"] = name;
    detail["passed"] = passed;
    list.push_back(std::move(detail));
    ok = ok && passed;
  }
};

void suite_kwise(Checks& c, bool quick, std::uint64_t) {
  const unsigned cases[][2] = {{8, 2}, {8, 3}, {16, 4}};
  for (const auto& nk : cases) {
    if (quick && nk[0] > 8) continue;
    for (auto m : {KwiseMethod::vandermonde_bit, KwiseMethod::bch_parity}) {
      const auto v = verify_kwise_exact(build_kwise_bernoulli(nk[0], nk[1], m), nk[1]);
      c.add("kwise " + to_string(m) + " n=" + std::to_string(nk[0]) + " k=" + std::to_string(nk[1]), v.pass);
    }
  }
}

void suite_poly(Checks& c, bool quick, std::uint64_t seed) {
  const unsigned runs = quick ? 10 : 100;
  unsigned passed = 0;
  for (unsigned i = 0; i < runs; ++i) {
    const auto p = random_poly(3 + i % 8, derive_seed(seed, 100 + i));
    const auto dec = spectral_decompose(p, 0.5);
    if (check_decomposition(dec, p.quad).all()) ++passed;
  }
  c.add("decomposition invariants", passed == runs, {{"runs", runs}, {"passed_runs", passed}});
}

void suite_moments(Checks& c, bool quick, std::uint64_t seed) {
  const unsigned runs = quick ? 5 : 20;
  double worst_identity = 0.0;
  double worst_ratio = 0.0;
  bool khin = true;
  for (unsigned i = 0; i < runs; ++i) {
    const unsigned n = 2 + i % 9;
    const auto a = random_trace_free(n, derive_seed(seed, 200 + i));
    DegTwoPoly p(n);
    p.quad = a;
    double off = 0.0;
    for (unsigned x = 0; x < n; ++x)
      for (unsigned y = x + 1; y < n; ++y) off += a(x, y) * a(x, y);
    const double m2 = exact_abs_moments(p, 2)[1];
    worst_identity = std::max(worst_identity, std::abs(m2 - 4.0 * off) / std::max(1.0, 4.0 * off));
    const unsigned ks[] = {2, 4};
    for (const auto& r : eigenbound_ratios(a, ks)) worst_ratio = std::max(worst_ratio, r.ratio);
    std::vector<double> v(n);
    for (unsigned x = 0; x < n; ++x) v[x] = a(0, (x + 1) % n) + 0.5;
    for (unsigned k : {2u, 4u}) khin = khin && khintchine_check(v, k).passed;
  }
  c.add("second moment identity", worst_identity <= 1e-12, {{"max_rel_error", worst_identity}});
  c.add("eigenbound ratio", worst_ratio <= tolerances().eigenbound_constant, {{"max_ratio", worst_ratio}});
  c.add("khintchine", khin);
}

void suite_ftmol(Checks& c, bool quick, std::uint64_t) {
  for (unsigned d : {1u, 2u}) {
    const auto u = check_unit_integral(d, 10.0);
    c.add("unit integral d=" + std::to_string(d), u.passed, {{"error", u.error}});
    const unsigned top = quick ? 2 : 3;
    bool l1 = true;
    for (unsigned a = 0; a <= top; ++a) {
      MultiIndex beta(d, 0);
      beta[0] = a;
      const auto r = deriv_l1_norm(d, beta);
      l1 = l1 && (r.passed || r.inconclusive);
    }
    c.add("derivative l1 d=" + std::to_string(d), l1);
    const auto fit = tail_fit(d);
    c.add("tail fit d=" + std::to_string(d), fit.passed, {{"constant", fit.constant}, {"golden", fit.golden}});
    bool xa = true;
    for (unsigned a = 0; a <= 4; ++a) {
      MultiIndex alpha(d, 0);
      alpha[0] = a;
      xa = xa && xalpha_b_norm(d, alpha).passed;
    }
    c.add("moment norms d=" + std::to_string(d), xa);
    std::vector<double> x(d, 0.0);
    const auto m = mollify_eval(Region::halfline(d, 0.0), 10.0, x);
    c.add("boundary half d=" + std::to_string(d), std::abs(m.value - 0.5) <= tolerances().boundary_half_tol,
          {{"value", m.value}});
  }
}

void suite_fool(Checks& c, bool quick, std::uint64_t seed) {
  DegTwoPoly p(2);
  p.add_term(0, 1, 1.0);
  LpOptions opt;
  const auto k1 = worst_case_lp(p, 1, opt);
  const auto k2 = worst_case_lp(p, 2, opt);
  c.add("x1x2 k=1", std::abs(k1.deviation - 1.0) <= 1e-9 && lp_verdict(k1) == Verdict::pass,
        {{"deviation", k1.deviation}});
  c.add("x1x2 k=2", std::abs(k2.deviation) <= 1e-9 && lp_verdict(k2) == Verdict::pass,
        {{"deviation", k2.deviation}});
  const unsigned runs = quick ? 3 : 10;
  double worst = 0.0;
  bool sound = true;
  for (unsigned i = 0; i < runs; ++i) {
    const unsigned n = 4 + i % 3;
    const auto r = worst_case_lp(random_poly(n, derive_seed(seed, 300 + i)), n, opt);
    worst = std::max(worst, r.deviation);
    sound = sound && lp_verdict(r) == Verdict::pass;
  }
  c.add("full independence collapse", worst <= 1e-7 && sound, {{"max_deviation", worst}});
}

void suite_tree(Checks& c, bool, std::uint64_t) {
  DegTwoPoly p(4);
  p.add_term(0, 1, 1.0);
  p.add_term(2, 3, 0.05);
  const double tau = 0.1;
  const auto tree = build_tree(p, tau);
  const auto space = build_kwise_bernoulli(4, std::max(1u, std::min(4u, tree.depth())), KwiseMethod::bch_parity);
  const auto rep = tree_report(tree, p, &space);
  c.add("tree mass", rep.total_mass == 1, {{"leaves", rep.leaf_count}});
  c.add("tree reach", rep.reach_matches.value_or(false));
  c.add("tree bad mass", rep.bad_mass <= to_rational(tau), {{"bad_mass", rep.bad_mass.get_d()}});
}

void suite_gw(Checks& c, bool quick, std::uint64_t seed) {
  const Graph edge = Graph::single_edge();
  const auto anti = generate_test_embedding(edge, EmbeddingKind::antipodal, 3);
  const GaussianSpace small(3, 2, GaussianMethod::inverse_cdf, 1u << 8);
  const auto r = round_with_space(edge, anti, small, 2000, seed);
  c.add("antipodal edge", r.min_cut == 1.0 && r.max_cut == 1.0);
  const Graph c5 = Graph::cycle(5);
  const auto e5 = generate_test_embedding(c5, EmbeddingKind::cycle_optimal);
  const double exact = expected_cut_exact(c5, e5);
  c.add("C5 expected cut", std::abs(exact - 4.0) <= 1e-9, {{"value", exact}});
  const GaussianSpace space(2, quick ? 64 : 1600, GaussianMethod::inverse_cdf, 1u << 20);
  const auto mc = round_with_space(c5, e5, space, quick ? 10000 : 100000, seed);
  c.add("C5 rounding", std::abs(mc.diff) <= 0.05 * c5.total_weight() + 3.0 * mc.std_error,
        {{"mean_cut", mc.mean_cut}});
}

struct Module {
  const char* name;
  void (*fn)(Checks&, bool, std::uint64_t);
};

const Module kModules[] = {{"kwise", suite_kwise}, {"poly", suite_poly}, {"moments", suite_moments},
                           {"ftmol", suite_ftmol}, {"fool", suite_fool}, {"tree", suite_tree},
                           {"gw", suite_gw}};

}  // namespace

Verdict suite_cmd(const Params& p, const Context& ctx, json& r) {
  const std::string name = p.str("name", "all");
  const bool quick = p.flag("quick", false);
  p.finish();
  ctx.allow_outputs({});
  bool known = name == "all";
  for (const auto& m : kModules) known = known || name == m.name;
  if (!known) throw SchemaError("params.name", "unknown suite " + name);
  bool ok = true;
  for (std::size_t i = 0; i < std::size(kModules); ++i) {
    const auto& m = kModules[i];
    if (name != "all" && name != m.name) continue;
    Checks c;
    m.fn(c, quick, derive_seed(ctx.seed, i));
    r["modules"][m.name] = {{"passed", c.ok}, {"checks", std::move(c.list)}};
    ok = ok && c.ok;
  }
  r["quick"] = quick;
  return ok ? Verdict::pass : Verdict::fail;
}

}  // namespace ptffool::cli
