#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "cli.hpp"
#include "commands.hpp"
#include "ptffool/fooling.hpp"
#include "ptffool/ftmol.hpp"
#include "ptffool/gw.hpp"
#include "ptffool/hypercube.hpp"
#include "ptffool/kwise.hpp"
#include "ptffool/moments.hpp"
#include "ptffool/poly.hpp"
#include "ptffool/regularity_tree.hpp"
#include "ptffool/spectral.hpp"

namespace ptffool::cli {

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::fail || b == Verdict::fail) return Verdict::fail;
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
  return Verdict::pass;
}

json rational_json(const Rational& q) { return {{"exact", to_string(q)}, {"value", q.get_d()}}; }

json subset_json(std::uint64_t s) {
  json a = json::array();
  for (unsigned i = 0; i < 64; ++i)
    if ((s >> i) & 1U) a.push_back(i + 1);
  return a;
}

unsigned small_uint(const Params& p, const std::string& key, std::uint64_t def) {
  const auto v = p.uint(key, def);
  if (v > 1u << 20) throw SchemaError("params." + key, "too large");
  return static_cast<unsigned>(v);
}

unsigned small_uint(const Params& p, const std::string& key) {
  const auto v = p.uint(key);
  if (v > 1u << 20) throw SchemaError("params." + key, "too large");
  return static_cast<unsigned>(v);
}

json deviation_json(const DeviationReport& r) {
  json j;
  j["n"] = r.n;
  j["k"] = r.k;
  j["scale"] = r.scale == ObjectiveScale::sign ? "sign" : "indicator";
  j["uniform_expectation"] = rational_json(r.uniform_expectation);
  if (r.space_expectation) j["space_expectation"] = rational_json(*r.space_expectation);
  if (r.lp_max) j["lp_max"] = *r.lp_max;
  if (r.lp_min) j["lp_min"] = *r.lp_min;
  j["deviation"] = r.deviation;
  j["sign_deviation"] = r.sign_deviation;
  j["indicator_deviation"] = r.indicator_deviation;
  j["status"] = r.status;
  if (r.lp_max || r.lp_min) {
    j["iterations"] = r.iterations;
    j["inconclusive"] = r.inconclusive;
    j["witnesses_exact"] = r.witnesses_exact;
  }
  if (r.cross_check_max) j["cross_check_max"] = *r.cross_check_max;
  if (r.cross_check_min) j["cross_check_min"] = *r.cross_check_min;
  if (r.cross_check_max || r.cross_check_min) j["cross_check_agrees"] = r.cross_check_agrees;
  auto cert = [](const SandwichCertificate& c) {
    return json{{"direction", to_string(c.direction)},
                {"terms", c.coeffs.size()},
                {"expectation", rational_json(c.expectation)},
                {"gap", rational_json(c.gap)},
                {"lp_gap", c.lp_gap},
                {"slack_added", rational_json(c.slack_added)},
                {"pointwise", c.pointwise},
                {"gap_matches", c.gap_matches}};
  };
  if (r.upper) j["upper_certificate"] = cert(*r.upper);
  if (r.lower) j["lower_certificate"] = cert(*r.lower);
  if (r.witness_max_expectation) j["witness_max_expectation"] = rational_json(*r.witness_max_expectation);
  if (r.witness_min_expectation) j["witness_min_expectation"] = rational_json(*r.witness_min_expectation);
  if (r.witness_max) j["witness_max_support"] = r.witness_max->size();
  if (r.witness_min) j["witness_min_support"] = r.witness_min->size();
  return j;
}

// LP report verdict: inconclusive on solver caps, fail on any broken invariant.
Verdict lp_verdict(const DeviationReport& r) {
  if (r.inconclusive) return Verdict::inconclusive;
  const double tol = tolerances().lp_result_tol;
  const double u = r.uniform_expectation.get_d();
  bool ok = r.cross_check_agrees && r.witnesses_exact;
  if (r.lp_max) ok = ok && *r.lp_max >= u - tol;
  if (r.lp_min) ok = ok && *r.lp_min <= u + tol;
  if (r.upper) ok = ok && r.upper->accepted();
  if (r.lower) ok = ok && r.lower->accepted();
  return ok ? Verdict::pass : Verdict::fail;
}

namespace {

json dense_json(const SymMatrix& a) {
  json rows = json::array();
  for (unsigned i = 0; i < a.size(); ++i) {
    json row = json::array();
    for (unsigned j = 0; j < a.size(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::resource, "cannot write " + path);
  os << text;
}

Verdict kwise_build(const Params& p, const Context& ctx, json& r) {
  const unsigned n = small_uint(p, "n");
  const unsigned k = small_uint(p, "k");
  const std::string method_name = p.str("method", "vandermonde_bit");
  p.finish();
  ctx.allow_outputs({"out"});
  const KwiseMethod method = parse_kwise_method(method_name);
  const auto space = build_kwise_bernoulli(n, k, method);
  const auto v = verify_kwise_exact(space, k);
  if (auto out = ctx.output("out")) save_space(*out, space);
  r["n"] = n;
  r["k"] = k;
  r["method"] = to_string(method);
  r["support_size"] = space.size();
  r["seed_bits"] = space.seed_bits;
  r["verified"] = v.pass;
  r["subsets_checked"] = v.subsets_checked;
  return v.pass ? Verdict::pass : Verdict::fail;
}

Verdict kwise_verify(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("space");
  const bool has_k = p.has("k");
  const unsigned k_param = has_k ? small_uint(p, "k") : 0;
  p.finish();
  ctx.allow_outputs({});
  const auto space = load_space(path);
  const unsigned k = has_k ? k_param : space.k_claimed;
  const auto v = verify_kwise_exact(space, k);
  r["n"] = space.n;
  r["k"] = k;
  r["support_size"] = space.size();
  r["pass"] = v.pass;
  r["subsets_checked"] = v.subsets_checked;
  if (v.worst_subset) {
    r["worst_subset"] = subset_json(*v.worst_subset);
    r["worst_bias"] = rational_json(v.worst_bias);
  }
  return v.pass ? Verdict::pass : Verdict::fail;
}

Verdict poly_info(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("poly");
  const double tau = p.real("tau", 0.1);
  p.finish();
  ctx.allow_outputs({});
  const auto poly = load_poly(path);
  const auto f = to_fourier(poly);
  const auto inf = influences(poly);
  r["n"] = poly.n;
  r["fourier_terms"] = f.coeffs.size();
  r["fourier_mass"] = f.sum_squares(true);
  r["variance"] = f.sum_squares(false);
  r["influences"] = inf.influence;
  r["total_influence"] = inf.total;
  r["tau"] = tau;
  if (inf.total > 0.0) {
    const auto reg = regularity(poly, tau);
    r["regular"] = reg.is_regular;
    r["max_ratio"] = reg.max_ratio;
    r["argmax"] = reg.argmax + 1;
    const auto ci = critical_index(poly, tau);
    r["critical_index"] = ci.index;
    r["critical_index_infinite"] = ci.infinite;
  }
  const auto facts = matrix_facts(multilinearize(poly).poly.quad);
  r["frobenius"] = facts.frobenius;
  r["lambda_max_magnitude"] = facts.lambda_max_magnitude;
  r["lambda_min_nonzero"] = facts.lambda_min_nonzero;
  return Verdict::pass;
}

Verdict poly_decompose(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("poly");
  const double delta = p.real("delta");
  p.finish();
  ctx.allow_outputs({"out"});
  const auto poly = load_poly(path);
  const auto dec = spectral_decompose(poly, delta);
  const auto check = check_decomposition(dec, poly.quad);
  r["n"] = poly.n;
  r["delta"] = delta;
  r["eigenvalues"] = dec.eigen.values;
  r["jacobi_sweeps"] = dec.eigen.sweeps;
  r["upsilon"] = dec.upsilon;
  r["constant"] = dec.constant;
  r["checks"] = {{"psd_gap", check.psd_gap},
                 {"small_part", check.small_part},
                 {"norms", check.norms},
                 {"reconstruction", check.reconstruction},
                 {"max_reconstruction_error", check.max_reconstruction_error},
                 {"p3_spectral_radius", check.p3_spectral_radius}};
  if (auto out = ctx.output("out")) {
    json d;
    d["p1"] = dense_json(dec.p1);
    d["p2"] = dense_json(dec.p2);
    d["p3"] = dense_json(dec.p3);
    d["p4"] = dec.p4;
    d["constant"] = dec.constant;
    d["upsilon"] = dec.upsilon;
    d["delta"] = dec.delta;
    write_text(*out, d.dump(2) + "\n");
  }
  return check.all() ? Verdict::pass : Verdict::fail;
}

Verdict moments_cmd(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("poly");
  const auto ks64 = p.uints("k", {2, 4});
  const std::string mode_name = p.str("mode", "exact");
  const std::string center_name = p.str("center", "none");
  const std::uint64_t samples = p.uint("samples", 100000);
  p.finish();
  ctx.allow_outputs({});
  if (mode_name != "exact" && mode_name != "mc") throw SchemaError("params.mode", "expected exact or mc");
  if (center_name != "none" && center_name != "trace") throw SchemaError("params.center", "expected none or trace");
  if (ks64.empty()) throw SchemaError("params.k", "empty");
  std::vector<unsigned> ks;
  for (auto k : ks64) {
    if (k < 1 || k > 64) throw SchemaError("params.k", "orders must lie in 1..64");
    ks.push_back(static_cast<unsigned>(k));
  }
  const auto poly = load_poly(path);
  const bool mc = mode_name == "mc";
  const double shift = center_name == "trace" ? poly.quad.trace() : 0.0;
  const unsigned kmax = std::max(2u, *std::max_element(ks.begin(), ks.end()));
  const auto m = mc ? mc_abs_moments(poly, kmax, samples, ctx.seed, shift) : exact_abs_moments(poly, kmax, shift);
  const bool pure = std::all_of(poly.linear.begin(), poly.linear.end(), [](double v) { return v == 0.0; }) &&
                    poly.constant == 0.0 && center_name == "trace";
  double lambda_max = 0.0;
  const double fro = poly.quad.frobenius();
  if (pure && fro > 0.0)
    for (double v : eigendecompose_symmetric(poly.quad).values) lambda_max = std::max(lambda_max, std::abs(v));
  const double l2 = std::sqrt(m[1]);
  r["bound_kind"] = pure ? "eigenbound" : "hypercontractive";
  r["mode"] = mode_name;
  r["center"] = center_name;
  json list = json::array();
  bool ok = true;
  for (unsigned k : ks) {
    json e;
    const double value = m[k - 1];
    double bound = 0.0;
    double limit = 1.0;
    if (pure) {
      bound = std::max(std::sqrt(static_cast<double>(k)) * fro, k * lambda_max);
      limit = tolerances().eigenbound_constant;
    } else {
      bound = (k >= 2 ? k - 1.0 : 1.0) * l2;
    }
    const double ratio = bound > 0.0 ? std::pow(value, 1.0 / k) / bound : 0.0;
    const bool passed = ratio <= limit * (1.0 + 1e-12);
    ok = ok && passed;
    e["k"] = k;
    e["value"] = value;
    e["bound"] = bound;
    e["ratio"] = ratio;
    e["passed"] = passed;
    e["seed"] = mc ? ctx.seed : 0;
    e["samples"] = mc ? samples : (std::uint64_t{1} << poly.n);
    list.push_back(std::move(e));
  }
  r["moments"] = std::move(list);
  return ok ? Verdict::pass : Verdict::fail;
}

std::vector<MultiIndex> indices_up_to(unsigned d, unsigned total) {
  std::vector<MultiIndex> out;
  if (d == 1) {
    for (unsigned a = 0; a <= total; ++a) out.push_back({a});
  } else {
    for (unsigned s = 0; s <= total; ++s)
      for (unsigned a = 0; a <= s; ++a) out.push_back({a, s - a});
  }
  return out;
}

json index_json(const MultiIndex& a) { return json(std::vector<unsigned>(a.begin(), a.end())); }

Verdict ftmol_check(const Params& p, const Context& ctx, json& r) {
  const unsigned d = small_uint(p, "d", 1);
  const double c = p.real("c", 10.0);
  const auto suites = p.strs("suite", {"unit", "l1", "tail", "moment", "mollify"});
  p.finish();
  ctx.allow_outputs({});
  if (d < 1 || d > 2) throw SchemaError("params.d", "must be 1 or 2");
  if (!(c > 0.0)) throw SchemaError("params.c", "must be positive");
  const auto& tol = tolerances();
  Verdict v = Verdict::pass;
  r["d"] = d;
  r["c"] = c;
  for (const auto& s : suites) {
    json out;
    bool ok = true;
    bool inconclusive = false;
    if (s == "unit") {
      for (double cc : {1.0, c}) {
        const auto u = check_unit_integral(d, cc);
        out["checks"].push_back({{"c", cc}, {"integral", u.integral}, {"error", u.error}, {"passed", u.passed}});
        ok = ok && u.passed;
      }
      if (d == 1) {
        double worst = 0.0;
        for (double rho : {0.0, 0.5, 1.0, 2.5, 5.0, 10.0, 20.0})
          worst = std::max(worst, std::abs(bhat_closed(1, rho) - bhat_quadrature(1, rho)));
        const bool agree = worst <= tol.bhat_agree_tol;
        out["bhat_closed_vs_quadrature"] = {{"max_abs_diff", worst}, {"passed", agree}};
        ok = ok && agree;
      }
    } else if (s == "l1") {
      for (const auto& beta : indices_up_to(d, 3)) {
        const auto l = deriv_l1_norm(d, beta);
        out["checks"].push_back({{"beta", index_json(beta)},
                                 {"value", l.value},
                                 {"bound_basic", l.bound_basic},
                                 {"bound_improved", l.bound_improved},
                                 {"tail_estimate", l.tail_estimate},
                                 {"inconclusive", l.inconclusive},
                                 {"passed", l.passed}});
        if (l.inconclusive) inconclusive = true;
        else ok = ok && l.passed;
      }
    } else if (s == "tail") {
      for (double z : kTailFitGrid) {
        const auto t = tail_mass(d, z);
        out["checks"].push_back({{"z", z}, {"tail", t.tail}, {"scaled", t.scaled}});
      }
      const auto fit = tail_fit(d);
      out["fit"] = {{"constant", fit.constant}, {"golden", fit.golden}, {"monotone", fit.monotone}};
      ok = fit.passed;
    } else if (s == "moment") {
      for (const auto& alpha : indices_up_to(d, 4)) {
        const auto x = xalpha_b_norm(d, alpha);
        out["checks"].push_back({{"alpha", index_json(alpha)},
                                 {"exact", x.exact},
                                 {"quadrature", x.quadrature},
                                 {"rel_error", x.rel_error},
                                 {"passed", x.passed}});
        ok = ok && x.passed;
      }
    } else if (s == "mollify") {
      const double theta = 0.3;
      std::vector<double> x(d, 0.0);
      x[0] = theta;
      const auto m = mollify_eval(Region::halfline(d, theta), c, x);
      const bool half = std::abs(m.value - 0.5) <= tol.boundary_half_tol;
      out["boundary"] = {{"value", m.value}, {"truncation", m.truncation}, {"passed", half}};
      ok = ok && half;
      inconclusive = inconclusive || m.inconclusive;
      if (d == 2) {
        const std::vector<double> corner{theta, -theta};
        const auto q = mollify_eval(Region::quadrant(corner), c, corner);
        const bool quarter = std::abs(q.value - 0.25) <= tol.boundary_half_tol;
        out["corner"] = {{"value", q.value}, {"passed", quarter}};
        ok = ok && quarter;
        inconclusive = inconclusive || q.inconclusive;
      }
      // Distance-1 gap 1 - F(x) against c; reported as gap * c^2.
      json sweep = json::array();
      for (double cc : {10.0, 20.0, 50.0}) {
        std::vector<double> y(d, 0.0);
        y[0] = theta + 1.0;
        const double gap = 1.0 - mollify_eval(Region::halfline(d, theta), cc, y).value;
        sweep.push_back({{"c", cc}, {"gap", gap}, {"gap_c2", gap * cc * cc}});
      }
      out["calibration"] = std::move(sweep);
    } else {
      throw SchemaError("params.suite", "unknown suite " + s);
    }
    out["passed"] = ok;
    out["inconclusive"] = inconclusive;
    r["suites"][s] = std::move(out);
    v = combine(v, !ok ? Verdict::fail : (inconclusive ? Verdict::inconclusive : Verdict::pass));
  }
  return v;
}

Verdict fool_exact(const Params& p, const Context& ctx, json& r) {
  const std::string poly_path = p.str("poly");
  const std::string space_path = p.str("space");
  p.finish();
  ctx.allow_outputs({});
  const auto poly = load_poly(poly_path);
  const auto space = load_space(space_path);
  const auto d = deviation(poly, space);
  r = deviation_json(d);
  r["deviation_exact"] = rational_json(abs(*d.space_expectation - d.uniform_expectation));
  return Verdict::pass;
}

Sense parse_sense(const std::string& s) {
  if (s == "max") return Sense::max;
  if (s == "min") return Sense::min;
  if (s == "both") return Sense::both;
  throw SchemaError("params.sense", "expected max, min or both");
}

Verdict fool_lp(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("poly");
  const unsigned k = small_uint(p, "k");
  const Sense sense = parse_sense(p.str("sense", "both"));
  const bool certificates = p.flag("certificates", true);
  const bool has_perm = p.has("permutation_seed");
  const std::uint64_t perm = has_perm ? p.uint("permutation_seed") : 0;
  p.finish();
  ctx.allow_outputs({"witness", "cert"});
  const auto poly = load_poly(path);
  LpOptions opt;
  opt.sense = sense;
  opt.certificates = certificates || ctx.output("cert").has_value();
  opt.witnesses = true;
  if (has_perm) opt.permutation_seed = perm;
  const auto d = worst_case_lp(poly, k, opt);
  r = deviation_json(d);
  const double u = d.uniform_expectation.get_d();
  const bool upper_side = d.lp_max && (!d.lp_min || *d.lp_max - u >= u - *d.lp_min);
  r["extremal_side"] = upper_side ? "max" : "min";
  if (auto out = ctx.output("witness")) {
    const auto& w = upper_side ? d.witness_max : d.witness_min;
    if (w) save_space(*out, *w);
  }
  if (auto out = ctx.output("cert")) {
    const auto& c = upper_side ? d.upper : d.lower;
    if (c) save_certificate(*out, *c);
  }
  return lp_verdict(d);
}

Verdict fool_sweep(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("poly");
  const unsigned kmax = small_uint(p, "kmax");
  p.finish();
  ctx.allow_outputs({"csv"});
  const auto poly = load_poly(path);
  LpOptions opt;
  opt.witnesses = true;
  const auto sweep = lp_sweep(poly, kmax, opt);
  Verdict v = sweep.monotone ? Verdict::pass : Verdict::fail;
  json rows = json::array();
  std::string csv = "k,lp_max,lp_min,uniform,deviation\n";
  for (const auto& rep : sweep.reports) {
    rows.push_back(deviation_json(rep));
    v = combine(v, lp_verdict(rep));
    char line[256];
    std::snprintf(line, sizeof line, "%u,%.17g,%.17g,%.17g,%.17g\n", rep.k, rep.lp_max.value_or(NAN) + 0.0,
                  rep.lp_min.value_or(NAN) + 0.0, rep.uniform_expectation.get_d() + 0.0, rep.deviation);
    csv += line;
  }
  if (auto out = ctx.output("csv")) write_text(*out, csv);
  r["kmax"] = kmax;
  r["monotone"] = sweep.monotone;
  r["reports"] = std::move(rows);
  return v;
}

Verdict tree_build(const Params& p, const Context& ctx, json& r) {
  const std::string path = p.str("poly");
  const double tau = p.real("tau");
  const unsigned max_depth = small_uint(p, "max_depth", 0);
  const std::string space_path = p.str("space", "");
  const std::uint64_t probes = p.uint("probes", 100);
  p.finish();
  ctx.allow_outputs({"out"});
  if (!(tau > 0.0 && tau < 0.5)) throw SchemaError("params.tau", "must lie in (0, 1/2)");
  const auto poly = load_poly(path);
  const auto tree = build_tree(poly, tau, max_depth);
  std::optional<SampleSpace> space;
  if (!space_path.empty()) space = load_space(space_path);
  const auto rep = tree_report(tree, poly, space ? &*space : nullptr);
  const double probe = probe_restrictions(tree, poly, static_cast<unsigned>(probes), ctx.seed);
  const double scale = 1.0 + std::abs(poly.constant) + poly.quad.frobenius() +
                       std::sqrt(std::inner_product(poly.linear.begin(), poly.linear.end(), poly.linear.begin(), 0.0));
  r["tau"] = tau;
  r["max_depth"] = tree.max_depth;
  r["test_k"] = tree.test_k;
  r["depth"] = tree.depth();
  r["leaves"] = rep.leaf_count;
  r["truncated"] = tree.truncated;
  json mass;
  for (const auto& [cls, m] : rep.mass) mass[to_string(cls)] = rational_json(m);
  r["mass"] = mass;
  r["total_mass"] = rational_json(rep.total_mass);
  r["bad_mass"] = rational_json(rep.bad_mass);
  json hist = json::object();
  for (const auto& [depth, count] : rep.depth_histogram) hist[std::to_string(depth)] = count;
  r["depth_histogram"] = hist;
  r["restriction_probe_error"] = probe;
  if (rep.reach_matches) r["reach_matches"] = *rep.reach_matches;
  if (rep.space_k) r["space_k"] = *rep.space_k;
  if (rep.deviation_total) {
    json by;
    for (const auto& [cls, m] : rep.deviation_by_class) by[to_string(cls)] = rational_json(m);
    r["deviation_by_class"] = by;
    r["deviation_total"] = rational_json(*rep.deviation_total);
  }
  if (auto out = ctx.output("out")) write_text(*out, tree_to_json(tree).dump(2) + "\n");
  else r["tree"] = tree_to_json(tree);

  if (tree.truncated) return Verdict::inconclusive;
  bool ok = rep.total_mass == 1 && rep.bad_mass <= to_rational(tau) && probe <= 1e-9 * scale;
  if (rep.reach_matches && space && space->k_claimed >= tree.depth()) ok = ok && *rep.reach_matches;
  return ok ? Verdict::pass : Verdict::fail;
}

Verdict gw_round(const Params& p, const Context& ctx, json& r) {
  const std::string graph_path = p.str("graph", "");
  const unsigned cycle = small_uint(p, "cycle", 0);
  const std::string emb_path = p.str("embedding", "");
  const std::string generate = p.str("generate", "");
  const unsigned dim = small_uint(p, "dim", 2);
  const double eps = p.real("eps", 0.05);
  const bool has_k = p.has("k");
  const unsigned k_param = has_k ? small_uint(p, "k") : 0;
  const std::uint64_t trials = p.uint("trials", 100000);
  const std::string method_name = p.str("method", "inverse_cdf");
  const bool has_res = p.has("resolution");
  const std::uint64_t res_param = has_res ? p.uint("resolution") : 0;
  const bool exhaustive = p.flag("exhaustive", false);
  const bool reference = p.flag("reference", false);
  p.finish();
  ctx.allow_outputs({"csv"});
  if ((graph_path.empty()) == (cycle == 0)) throw SchemaError("params.graph", "give exactly one of graph or cycle");
  if ((emb_path.empty()) == (generate.empty()))
    throw SchemaError("params.embedding", "give exactly one of embedding or generate");
  if (!(eps > 0.0 && eps < 1.0)) throw SchemaError("params.eps", "must lie in (0, 1)");
  const Graph g = cycle ? Graph::cycle(cycle) : load_graph(graph_path);
  const Embedding e = emb_path.empty() ? generate_test_embedding(g, parse_embedding_kind(generate), dim, ctx.seed)
                                       : load_embedding(emb_path);
  const unsigned k = has_k ? k_param : default_gw_k(eps);
  const GaussianMethod method = parse_gaussian_method(method_name);
  const std::uint64_t resolution = has_res ? res_param : (method == GaussianMethod::inverse_cdf ? (1u << 20) : 10001);
  const GaussianSpace space(e.dim, k, method, resolution);
  const auto rep = round_with_space(g, e, space, trials, ctx.seed, exhaustive);
  auto rounding_json = [](const RoundingReport& x) {
    return json{{"mode", to_string(x.mode)}, {"trials", x.trials},     {"mean_cut", x.mean_cut},
                {"std_error", x.std_error},  {"ci_low", x.ci_low},     {"ci_high", x.ci_high},
                {"min_cut", x.min_cut},      {"max_cut", x.max_cut},   {"exact", x.exact},
                {"diff", x.diff}};
  };
  r["k"] = k;
  r["eps"] = eps;
  r["method"] = to_string(method);
  r["resolution"] = resolution;
  r["vertices"] = g.vertices;
  r["edges"] = g.edges.size();
  r["total_weight"] = g.total_weight();
  r["expected_cut_exact"] = rep.exact;
  r["rounding"] = rounding_json(rep);
  const double limit = eps * g.total_weight() + 3.0 * rep.std_error;
  const bool ok = std::abs(rep.diff) <= limit && rep.min_cut >= 0.0 && rep.max_cut <= g.total_weight();
  r["limit"] = limit;
  r["within_limit"] = ok;
  std::string csv = "mode,k,trials,mean_cut,std_error,ci_low,ci_high,exact,diff\n";
  auto add_row = [&](const RoundingReport& x) {
    char line[320];
    std::snprintf(line, sizeof line, "%s,%u,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", to_string(x.mode).c_str(), k,
                  static_cast<unsigned long long>(x.trials), x.mean_cut, x.std_error, x.ci_low, x.ci_high, x.exact,
                  x.diff);
    csv += line;
  };
  add_row(rep);
  if (reference) {
    const auto ind = round_independent(g, e, trials, derive_seed(ctx.seed, 1));
    r["reference"] = rounding_json(ind);
    add_row(ind);
  }
  if (auto out = ctx.output("csv")) write_text(*out, csv);
  return ok ? Verdict::pass : Verdict::fail;
}

struct Entry {
  const char* name;
  CommandFn fn;
};

const Entry kCommands[] = {
    {"kwise build", kwise_build}, {"kwise verify", kwise_verify}, {"poly info", poly_info},
    {"poly decompose", poly_decompose}, {"moments", moments_cmd}, {"ftmol check", ftmol_check},
    {"fool exact", fool_exact}, {"fool lp", fool_lp}, {"fool sweep", fool_sweep},
    {"tree build", tree_build}, {"gw round", gw_round}, {"suite", suite_cmd},
};

}  // namespace

CommandFn find_command(const std::string& name) {
  for (const auto& e : kCommands)
    if (name == e.name) return e.fn;
  return nullptr;
}

std::vector<std::string> commands() {
  std::vector<std::string> out;
  for (const auto& e : kCommands) out.emplace_back(e.name);
  return out;
}

}  // namespace ptffool::cli
