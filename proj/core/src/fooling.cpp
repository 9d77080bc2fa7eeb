#include "ptffool/fooling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "ptffool/hypercube.hpp"

namespace ptffool {

namespace {

constexpr unsigned kMcBlocks = 64;

Rational uniform_mean(std::span<const std::int8_t> f) {
  long long s = 0;
  for (auto v : f) s += v;
  Rational q(BigInt(static_cast<long>(s)), BigInt(1) << static_cast<unsigned>(std::countr_zero(f.size())));
  q.canonicalize();
  return q;
}

std::vector<BigInt> integer_fwht(std::vector<BigInt> v) {
  walsh_hadamard(std::span<BigInt>(v));
  return v;
}

BigInt round_scaled(double v, unsigned log2_den) {
  const double s = std::ldexp(v, static_cast<int>(log2_den));
  require(std::isfinite(s) && std::abs(s) < 9.0e18, ErrorKind::tolerance, "coefficient out of range for rounding");
  return BigInt(static_cast<long>(std::llround(s)));
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace

Rational exact_sgn_expectation(const DegTwoPoly& p) {
  require(p.n <= tolerances().exact_max_n, ErrorKind::resource,
          "uniform enumeration needs n <= " + std::to_string(tolerances().exact_max_n));
  const auto signs = sign_table(p);
  return uniform_mean(signs);
}

Rational exact_sgn_expectation(const DegTwoPoly& p, const SampleSpace& space) {
  require(space.n == p.n, ErrorKind::invalid_argument, "space dimension differs from polynomial");
  require(space.size() <= tolerances().support_budget, ErrorKind::resource, "space support exceeds budget");
  if (space.uniform_weights()) {
    long long s = 0;
    for (auto x : space.points) s += exact_sign(p, x);
    Rational e(BigInt(static_cast<long>(s)), BigInt(static_cast<unsigned long>(space.size())));
    e.canonicalize();
    return e;
  }
  Rational e = 0;
  for (std::size_t i = 0; i < space.size(); ++i) e += space.weights[i] * exact_sign(p, space.points[i]);
  return e;
}

std::string to_string(SandwichCertificate::Direction d) {
  return d == SandwichCertificate::Direction::upper ? "upper" : "lower";
}

CertificateCheck verify_certificate(const SandwichCertificate& cert, std::span<const std::int8_t> f) {
  require(f.size() == (std::size_t{1} << cert.n), ErrorKind::invalid_argument, "objective size mismatch");
  BigInt den = 1;
  for (const auto& [s, c] : cert.coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<BigInt> z(f.size(), 0);
  for (const auto& [s, c] : cert.coeffs) {
    require(s < f.size() && std::popcount(s) <= static_cast<int>(cert.k), ErrorKind::contract_violation,
            "certificate term outside degree bound");
    z[s] = c.get_num() * (den / c.get_den());
  }
  const auto q = integer_fwht(std::move(z));
  CertificateCheck out;
  out.pointwise = true;
  const bool upper = cert.direction == SandwichCertificate::Direction::upper;
  for (std::size_t x = 0; x < f.size(); ++x) {
    const BigInt target = den * f[x];
    if (upper ? q[x] < target : q[x] > target) {
      out.pointwise = false;
      out.violation = x;
      break;
    }
  }
  auto it = cert.coeffs.find(0);
  out.expectation = it == cert.coeffs.end() ? Rational(0) : it->second;
  const Rational target = uniform_mean(f);
  out.gap = upper ? Rational(out.expectation - target) : Rational(target - out.expectation);
  return out;
}

void write_certificate(std::ostream& os, const SandwichCertificate& cert) {
  os << "sandwich " << cert.n << ' ' << cert.k << ' ' << to_string(cert.direction) << '\n';
  for (const auto& [s, c] : cert.coeffs) {
    os << "T " << to_string(c);
    for (unsigned i = 0; i < cert.n; ++i)
      if ((s >> i) & 1U) os << ' ' << i + 1;
    os << '\n';
  }
}

SandwichCertificate read_certificate(std::istream& is) {
  SandwichCertificate cert;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto bad = [&](const std::string& what) {
      fail(ErrorKind::parse, "certificate line " + std::to_string(lineno) + ": " + what);
    };
    if (!header) {
      std::string dir;
      if (tag != "sandwich" || !(ls >> cert.n >> cert.k >> dir)) bad("expected header");
      if (dir == "upper") cert.direction = SandwichCertificate::Direction::upper;
      else if (dir == "lower") cert.direction = SandwichCertificate::Direction::lower;
      else bad("unknown direction " + dir);
      if (cert.n == 0 || cert.n > 24) bad("dimension out of range");
      header = true;
      continue;
    }
    if (tag != "T") bad("unknown record " + tag);
    std::string coef;
    if (!(ls >> coef)) bad("missing coefficient");
    std::uint64_t s = 0;
    unsigned idx = 0;
    while (ls >> idx) {
      if (idx == 0 || idx > cert.n) bad("index out of range");
      s |= std::uint64_t{1} << (idx - 1);
    }
    if (!ls.eof()) bad("malformed index list");
    cert.coeffs[s] += parse_rational(coef);
  }
  require(header, ErrorKind::parse, "certificate: missing header");
  auto it = cert.coeffs.find(0);
  cert.expectation = it == cert.coeffs.end() ? Rational(0) : it->second;
  return cert;
}

void save_certificate(const std::string& path, const SandwichCertificate& cert) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::resource, "cannot write " + path);
  write_certificate(os, cert);
}

SandwichCertificate load_certificate(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::resource, "cannot read " + path);
  return read_certificate(is);
}

std::uint64_t parity_row_count(unsigned n, unsigned k) {
  std::uint64_t rows = 1;
  std::uint64_t binom = 1;
  for (unsigned j = 1; j <= k && j <= n; ++j) {
    binom = binom * (n - j + 1) / j;
    rows += binom;
  }
  return rows;
}

ParityProgram::ParityProgram(unsigned n, unsigned k, std::vector<double> cost)
    : n_(n), k_(k), cost_(std::move(cost)) {
  require(n >= 1 && n <= tolerances().lp_max_n, ErrorKind::resource,
          "LP mode needs 1 <= n <= " + std::to_string(tolerances().lp_max_n));
  require(k <= n, ErrorKind::invalid_order, "k exceeds n");
  require(cost_.size() == (std::size_t{1} << n), ErrorKind::invalid_argument, "cost vector must have 2^n entries");
  require(parity_row_count(n, k) <= tolerances().lp_max_rows, ErrorKind::resource,
          "LP has " + std::to_string(parity_row_count(n, k)) + " rows, above lp_max_rows");
  subsets_.push_back(0);
  for_each_low_degree_subset(n, k, [&](std::uint64_t s) { subsets_.push_back(s); });
}

void ParityProgram::column(std::size_t j, std::span<double> out) const {
  for (std::size_t r = 0; r < subsets_.size(); ++r) out[r] = character(j, subsets_[r]);
}

void ParityProgram::price(std::span<const double> y, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t r = 0; r < subsets_.size(); ++r) out[subsets_[r]] = y[r];
  walsh_hadamard(out);
}

SandwichCertificate sandwich_from_dual(const ParityProgram& lp, const SimplexResult& res,
                                       SandwichCertificate::Direction dir,
                                       std::span<const std::int8_t> f, double lp_value) {
  require(res.status == LpStatus::optimal, ErrorKind::contract_violation, "certificate needs an optimal LP");
  const auto& t = tolerances();
  const unsigned bits = t.certificate_denominator_log2;
  const bool upper = dir == SandwichCertificate::Direction::upper;
  const std::size_t size = std::size_t{1} << lp.n();
  std::vector<BigInt> z(size, 0);
  for (std::size_t r = 0; r < lp.subsets().size(); ++r)
    z[lp.subsets()[r]] = round_scaled(upper ? -res.y[r] : res.y[r], bits);
  const auto q = integer_fwht(z);

  const BigInt den = BigInt(1) << bits;
  BigInt worst = 0;
  for (std::size_t x = 0; x < size; ++x) {
    const BigInt target = den * f[x];
    const BigInt v = upper ? BigInt(target - q[x]) : BigInt(q[x] - target);
    if (v > worst) worst = v;
  }
  z[0] += upper ? worst : BigInt(-worst);

  SandwichCertificate cert;
  cert.n = lp.n();
  cert.k = lp.k();
  cert.direction = dir;
  for (std::size_t r = 0; r < lp.subsets().size(); ++r) {
    const auto s = lp.subsets()[r];
    if (s != 0 && z[s] == 0) continue;
    Rational c(z[s], den);
    c.canonicalize();
    cert.coeffs[s] = c;
  }
  cert.slack_added = Rational(worst, den);
  cert.slack_added.canonicalize();
  const auto check = verify_certificate(cert, f);
  cert.pointwise = check.pointwise;
  cert.expectation = check.expectation;
  cert.target_expectation = uniform_mean(f);
  cert.gap = check.gap;
  const double uniform = to_double(cert.target_expectation);
  cert.lp_gap = upper ? lp_value - uniform : uniform - lp_value;
  cert.gap_matches = std::abs(to_double(cert.gap) - cert.lp_gap) <= t.certificate_gap_tol;
  return cert;
}

SampleSpace repair_witness(unsigned n, unsigned k, std::span<const double> w) {
  const std::size_t size = std::size_t{1} << n;
  require(w.size() == size, ErrorKind::invalid_argument, "witness must have 2^n weights");
  std::vector<BigInt> W(size);
  for (std::size_t x = 0; x < size; ++x) W[x] = round_scaled(std::max(0.0, w[x]), 48);
  const auto F = integer_fwht(W);
  std::vector<BigInt> g(size, 0);
  for_each_low_degree_subset(n, k, [&](std::uint64_t s) { g[s] = F[s]; });
  const auto h = integer_fwht(std::move(g));
  std::vector<BigInt> v(size);
  BigInt lowest = 0;
  for (std::size_t x = 0; x < size; ++x) {
    v[x] = W[x] * static_cast<unsigned long>(size) - h[x];
    if (v[x] < lowest) lowest = v[x];
  }
  BigInt total = 0;
  for (auto& e : v) {
    e -= lowest;
    total += e;
  }
  require(total > 0, ErrorKind::internal, "witness repair produced zero mass");
  SampleSpace s;
  s.n = n;
  s.k_claimed = k;
  for (std::size_t x = 0; x < size; ++x) {
    if (v[x] == 0) continue;
    s.points.push_back(x);
    Rational q(v[x], total);
    q.canonicalize();
    s.weights.push_back(q);
  }
  return s;
}

namespace {

struct SolvedSide {
  std::optional<double> value;
  std::optional<double> cross;
  bool inconclusive = false;
  std::string status;
  int iterations = 0;
  std::optional<SandwichCertificate> cert;
  std::optional<SampleSpace> witness;
  std::optional<Rational> witness_expectation;
  bool witness_exact = true;
};

SolvedSide solve_side(unsigned n, unsigned k, std::span<const std::int8_t> f, bool maximize,
                      const LpOptions& opt) {
  std::vector<double> cost(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) cost[x] = maximize ? -f[x] : f[x];
  ParityProgram lp(n, k, std::move(cost));
  const auto res = solve_simplex(lp, opt.simplex);
  SolvedSide side;
  side.status = to_string(res.status);
  side.iterations = res.iterations;
  require(res.status != LpStatus::infeasible && res.status != LpStatus::unbounded, ErrorKind::internal,
          "fooling LP reported " + side.status);
  if (res.status != LpStatus::optimal) {
    side.inconclusive = true;
    return side;
  }
  const double value = maximize ? -res.objective : res.objective;
  side.value = value;
  if (opt.certificates) {
    side.cert = sandwich_from_dual(lp, res,
                                   maximize ? SandwichCertificate::Direction::upper
                                            : SandwichCertificate::Direction::lower,
                                   f, value);
  }
  if (opt.witnesses) {
    auto space = repair_witness(n, k, res.x);
    Rational e = 0;
    for (std::size_t i = 0; i < space.size(); ++i) e += space.weights[i] * f[space.points[i]];
    side.witness_expectation = e;
    side.witness_exact = verify_kwise_exact(space, k).pass;
    side.witness = std::move(space);
  }
  if (opt.permutation_seed) {
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(*opt.permutation_seed, maximize ? 1 : 2));
    std::shuffle(order.begin(), order.end(), rng);
    PermutedProgram perm(lp, std::move(order));
    const auto again = solve_simplex(perm, opt.simplex);
    if (again.status == LpStatus::optimal) side.cross = maximize ? -again.objective : again.objective;
    else side.inconclusive = true;
  }
  return side;
}

void fill_scales(DeviationReport& r) {
  if (r.scale == ObjectiveScale::sign) {
    r.sign_deviation = r.deviation;
    r.indicator_deviation = r.deviation / 2.0;
  } else {
    r.indicator_deviation = r.deviation;
    r.sign_deviation = 2.0 * r.deviation;
  }
}

}  // namespace

DeviationReport deviation(const DegTwoPoly& p, const SampleSpace& space) {
  DeviationReport r;
  r.n = p.n;
  r.k = space.k_claimed;
  r.uniform_expectation = exact_sgn_expectation(p);
  r.space_expectation = exact_sgn_expectation(p, space);
  Rational d = *r.space_expectation - r.uniform_expectation;
  r.deviation = std::abs(to_double(d));
  r.status = "exact";
  fill_scales(r);
  return r;
}

DeviationReport worst_case_objective(unsigned n, unsigned k, std::span<const std::int8_t> f,
                                     ObjectiveScale scale, const LpOptions& opt) {
  require(f.size() == (std::size_t{1} << n), ErrorKind::invalid_argument, "objective must have 2^n entries");
  for (auto v : f) {
    const bool ok = scale == ObjectiveScale::sign ? (v == 1 || v == -1) : (v == 0 || v == 1);
    require(ok, ErrorKind::invalid_argument, "objective value outside its scale");
  }
  DeviationReport r;
  r.n = n;
  r.k = k;
  r.scale = scale;
  r.uniform_expectation = uniform_mean(f);
  const double u = to_double(r.uniform_expectation);
  const double tol = tolerances().lp_result_tol;
  std::vector<std::string> statuses;
  double dev = 0.0;
  bool any = false;

  auto absorb = [&](SolvedSide& s, bool maximize) {
    statuses.push_back(s.status);
    r.iterations += s.iterations;
    r.inconclusive = r.inconclusive || s.inconclusive;
    if (!s.value) return;
    const double gap = maximize ? *s.value - u : u - *s.value;
    dev = any ? std::max(dev, gap) : gap;
    any = true;
    if (s.cross) r.cross_check_agrees = r.cross_check_agrees && std::abs(*s.cross - *s.value) <= tol;
    if (!s.witness_exact) r.witnesses_exact = false;
    if (maximize) {
      r.lp_max = s.value;
      r.cross_check_max = s.cross;
      r.upper = std::move(s.cert);
      r.witness_max = std::move(s.witness);
      r.witness_max_expectation = s.witness_expectation;
    } else {
      r.lp_min = s.value;
      r.cross_check_min = s.cross;
      r.lower = std::move(s.cert);
      r.witness_min = std::move(s.witness);
      r.witness_min_expectation = s.witness_expectation;
    }
  };

  if (opt.sense != Sense::min) {
    auto s = solve_side(n, k, f, true, opt);
    absorb(s, true);
  }
  if (opt.sense != Sense::max) {
    auto s = solve_side(n, k, f, false, opt);
    absorb(s, false);
  }
  r.deviation = dev + 0.0;
  std::string status;
  for (const auto& s : statuses) status += (status.empty() ? "" : ",") + s;
  r.status = status;
  fill_scales(r);
  return r;
}

DeviationReport worst_case_lp(const DegTwoPoly& p, unsigned k, const LpOptions& opt) {
  require(p.n >= 1 && p.n <= tolerances().lp_max_n, ErrorKind::resource,
          "LP mode needs 1 <= n <= " + std::to_string(tolerances().lp_max_n));
  const auto signs = sign_table(p);
  return worst_case_objective(p.n, k, signs, ObjectiveScale::sign, opt);
}

DeviationReport intersection_deviation(std::span<const DegTwoPoly> ps, unsigned k, const LpOptions& opt) {
  require(!ps.empty() && ps.size() <= 3, ErrorKind::invalid_argument, "intersections take 1 to 3 polynomials");
  const unsigned n = ps[0].n;
  for (const auto& p : ps) require(p.n == n, ErrorKind::invalid_argument, "polynomials differ in dimension");
  require(n >= 1 && n <= tolerances().lp_max_n, ErrorKind::resource,
          "LP mode needs 1 <= n <= " + std::to_string(tolerances().lp_max_n));
  std::vector<std::int8_t> f(std::size_t{1} << n, 1);
  for (const auto& p : ps) {
    const auto s = sign_table(p);
    for (std::size_t x = 0; x < f.size(); ++x)
      if (s[x] < 0) f[x] = 0;
  }
  return worst_case_objective(n, k, f, ObjectiveScale::indicator, opt);
}

SweepResult lp_sweep(const DegTwoPoly& p, unsigned kmax, const LpOptions& opt) {
  require(kmax >= 1 && kmax <= p.n, ErrorKind::invalid_order, "kmax must lie in [1, n]");
  SweepResult out;
  out.reports.resize(kmax);
  parallel_blocks(kmax, [&](std::size_t i) {
    out.reports[i] = worst_case_lp(p, static_cast<unsigned>(i + 1), opt);
  });
  const double tol = tolerances().lp_result_tol;
  for (std::size_t i = 1; i < out.reports.size(); ++i) {
    const auto& a = out.reports[i - 1];
    const auto& b = out.reports[i];
    if (b.deviation > a.deviation + tol) out.monotone = false;
    if (a.lp_max && b.lp_max && *b.lp_max > *a.lp_max + tol) out.monotone = false;
    if (a.lp_min && b.lp_min && *b.lp_min < *a.lp_min - tol) out.monotone = false;
  }
  return out;
}

DegTwoPoly normalize_variance(const DegTwoPoly& p) {
  const double mass = to_fourier(p).sum_squares(false);
  require(mass > 0.0, ErrorKind::degenerate_input, "polynomial is constant on the cube");
  return p.scaled(1.0 / std::sqrt(mass));
}

AnticoncentrationReport anticoncentration_probe(const DegTwoPoly& p, double eps, double t,
                                                const SampleSpace& space) {
  require(space.n == p.n, ErrorKind::invalid_argument, "space dimension differs from polynomial");
  require(eps > 0.0, ErrorKind::invalid_argument, "eps must be positive");
  AnticoncentrationReport r;
  r.mode = ProbeMode::space;
  r.samples = space.size();
  Rational mass = 0;
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (std::abs(p.evaluate(space.points[i]) - t) < eps) {
      if (space.uniform_weights()) ++hits;
      else mass += space.weights[i];
    }
  }
  if (space.uniform_weights()) mass = Rational(BigInt(static_cast<unsigned long>(hits)), BigInt(static_cast<unsigned long>(space.size())));
  mass.canonicalize();
  r.exact = mass;
  r.probability = to_double(mass);
  r.ci_low = r.ci_high = r.probability;
  return r;
}

AnticoncentrationReport anticoncentration_probe_gaussian(const DegTwoPoly& p, double eps, double t,
                                                         std::uint64_t samples, std::uint64_t seed) {
  require(eps > 0.0 && samples > 0, ErrorKind::invalid_argument, "eps and samples must be positive");
  const DegTwoPoly q = multilinearize(p).poly;
  const double shift = multilinearize(p).folded;
  std::vector<std::uint64_t> counts(kMcBlocks, 0);
  parallel_blocks(kMcBlocks, [&](std::size_t b) {
    const std::uint64_t lo = samples * b / kMcBlocks;
    const std::uint64_t hi = samples * (b + 1) / kMcBlocks;
    std::mt19937_64 rng(derive_seed(seed, b));
    std::normal_distribution<double> g;
    std::vector<double> x(q.n);
    std::uint64_t c = 0;
    for (std::uint64_t s = lo; s < hi; ++s) {
      for (auto& v : x) v = g(rng);
      if (std::abs(q.evaluate(x) + shift - t) < eps) ++c;
    }
    counts[b] = c;
  });
  const std::uint64_t hits = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  AnticoncentrationReport r;
  r.mode = ProbeMode::gaussian_mc;
  r.samples = samples;
  r.seed = seed;
  const double nn = static_cast<double>(samples);
  const double ph = static_cast<double>(hits) / nn;
  r.probability = ph;
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / nn;
  const double centre = (ph + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z * z / (4.0 * nn * nn)) / denom;
  r.ci_low = std::max(0.0, centre - half);
  r.ci_high = std::min(1.0, centre + half);
  return r;
}

}  // namespace ptffool
