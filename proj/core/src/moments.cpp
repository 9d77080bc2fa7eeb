#include "ptffool/moments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ptffool/hypercube.hpp"
#include "ptffool/spectral.hpp"

namespace ptffool {

namespace {

constexpr std::size_t kMcBlocks = 64;

void check_exact_size(unsigned n) {
  require(n <= tolerances().exact_max_n, ErrorKind::resource,
          "exact enumeration needs n <= " + std::to_string(tolerances().exact_max_n));
}

void accumulate(std::vector<DoubleDouble>& acc, double a) {
  double pw = a;
  for (auto& s : acc) {
    s.add(pw);
    pw *= a;
  }
}

DegTwoPoly quadratic_form_poly(const SymMatrix& a, double constant) {
  DegTwoPoly p(a.size());
  p.quad = a;
  p.constant = constant;
  return p;
}

double shift_for(const DegTwoPoly& p, Center center) {
  return center == Center::trace ? p.quad.trace() : 0.0;
}

}  // namespace

std::string to_string(MomentMode m) { return m == MomentMode::exact ? "exact" : "mc"; }

std::vector<double> exact_abs_moments(const DegTwoPoly& p, unsigned kmax, double shift) {
  check_exact_size(p.n);
  const unsigned low = default_block_bits(p.n);
  const std::size_t blocks = std::size_t{1} << (p.n - low);
  std::vector<std::vector<DoubleDouble>> partial(blocks, std::vector<DoubleDouble>(kmax));
  parallel_blocks(blocks, [&](std::size_t b) {
    auto& acc = partial[b];
    walk_block(p, low, b, [&](PointMask, long double v) {
      accumulate(acc, static_cast<double>(std::abs(v - static_cast<long double>(shift))));
    });
  });
  std::vector<double> out(kmax);
  const double scale = std::ldexp(1.0, -static_cast<int>(p.n));
  for (unsigned j = 0; j < kmax; ++j) {
    DoubleDouble total;
    for (const auto& acc : partial) total.add(acc[j]);
    out[j] = total.value() * scale;
  }
  return out;
}

std::vector<double> mc_abs_moments(const DegTwoPoly& p, unsigned kmax, std::uint64_t samples,
                                   std::uint64_t seed, double shift) {
  require(samples > 0, ErrorKind::invalid_argument, "need at least one sample");
  require(p.n <= 64, ErrorKind::invalid_argument, "cube sampling needs n <= 64");
  std::vector<std::vector<DoubleDouble>> partial(kMcBlocks, std::vector<DoubleDouble>(kmax));
  parallel_blocks(kMcBlocks, [&](std::size_t b) {
    const std::uint64_t lo = samples * b / kMcBlocks;
    const std::uint64_t hi = samples * (b + 1) / kMcBlocks;
    std::mt19937_64 rng(derive_seed(seed, b));
    const PointMask mask = p.n == 64 ? ~PointMask{0} : (PointMask{1} << p.n) - 1;
    for (std::uint64_t s = lo; s < hi; ++s) {
      accumulate(partial[b], std::abs(p.evaluate(rng() & mask) - shift));
    }
  });
  std::vector<double> out(kmax);
  for (unsigned j = 0; j < kmax; ++j) {
    DoubleDouble total;
    for (const auto& acc : partial) total.add(acc[j]);
    out[j] = total.value() / static_cast<double>(samples);
  }
  return out;
}

MomentReport exact_moment_hypercube(const DegTwoPoly& p, unsigned k, Center center) {
  require(k >= 1 && k <= tolerances().exact_max_k, ErrorKind::invalid_argument,
          "moment order must be in 1.." + std::to_string(tolerances().exact_max_k));
  MomentReport r;
  r.k = k;
  r.mode = MomentMode::exact;
  r.value = exact_abs_moments(p, k, shift_for(p, center))[k - 1];
  r.samples = std::uint64_t{1} << p.n;
  return r;
}

MomentReport mc_moment_hypercube(const DegTwoPoly& p, unsigned k, Center center,
                                 std::uint64_t samples, std::uint64_t seed) {
  require(k >= 1, ErrorKind::invalid_argument, "moment order must be >= 1");
  MomentReport r;
  r.k = k;
  r.mode = MomentMode::monte_carlo;
  r.value = mc_abs_moments(p, k, samples, seed, shift_for(p, center))[k - 1];
  r.samples = samples;
  r.seed = seed;
  return r;
}

std::vector<MomentReport> eigenbound_ratios(const SymMatrix& a, std::span<const unsigned> ks) {
  const unsigned kmax = ks.empty() ? 0 : *std::max_element(ks.begin(), ks.end());
  const double fro = a.frobenius();
  std::vector<MomentReport> out;
  std::vector<double> moments;
  double lambda_max = 0.0;
  if (fro > 0.0) {
    moments = exact_abs_moments(quadratic_form_poly(a, -a.trace()), kmax);
    for (double v : eigendecompose_symmetric(a).values) lambda_max = std::max(lambda_max, std::abs(v));
  }
  for (unsigned k : ks) {
    MomentReport r;
    r.k = k;
    r.samples = std::uint64_t{1} << a.size();
    r.bound = std::max(std::sqrt(static_cast<double>(k)) * fro, k * lambda_max);
    if (fro > 0.0) {
      r.value = moments[k - 1];
      r.ratio = std::pow(r.value, 1.0 / k) / r.bound;
    }
    r.passed = r.ratio <= tolerances().eigenbound_constant;
    out.push_back(r);
  }
  return out;
}

MomentReport eigenbound_ratio(const SymMatrix& a, unsigned k) {
  const unsigned ks[] = {k};
  return eigenbound_ratios(a, ks).front();
}

MomentReport khintchine_check(std::span<const double> a, unsigned k) {
  DegTwoPoly p(static_cast<unsigned>(a.size()));
  double norm2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    p.linear[i] = a[i];
    norm2 += a[i] * a[i];
  }
  MomentReport r;
  r.k = k;
  r.samples = std::uint64_t{1} << p.n;
  r.value = exact_abs_moments(p, k)[k - 1];
  r.bound = std::pow(norm2, k / 2.0) * std::pow(static_cast<double>(k), k / 2.0);
  r.ratio = r.bound > 0 ? r.value / r.bound : 0.0;
  r.passed = r.value <= r.bound * (1.0 + 1e-12);
  return r;
}

MomentReport boundmoment_check(const SymMatrix& a, unsigned k) {
  MomentReport r;
  r.k = k;
  r.samples = std::uint64_t{1} << a.size();
  r.value = exact_abs_moments(quadratic_form_poly(a, 0.0), k)[k - 1];
  r.bound = std::pow(a.frobenius() * k, k) + std::pow(std::abs(a.trace()), k);
  r.ratio = r.bound > 0 ? std::pow(r.value / r.bound, 1.0 / k) : 0.0;
  r.passed = r.ratio <= 2.0 * tolerances().eigenbound_constant;
  return r;
}

namespace {

unsigned poly_degree(const DegTwoPoly& p) {
  for (unsigned i = 0; i < p.n; ++i)
    for (unsigned j = i + 1; j < p.n; ++j)
      if (p.quad(i, j) != 0.0) return 2;
  for (double v : p.linear)
    if (v != 0.0) return 1;
  return 0;
}

}  // namespace

TailReport hypercontractive_tail_check(const DegTwoPoly& p, double t, std::uint64_t trials,
                                       std::uint64_t seed) {
  TailReport r;
  r.t = t;
  r.degree = poly_degree(p);
  r.exact = p.n <= tolerances().exact_max_n;
  if (r.exact) {
    r.norm = std::sqrt(exact_abs_moments(p, 2)[1]);
    const double level = t * r.norm;
    std::uint64_t hits = 0;
    const unsigned low = default_block_bits(p.n);
    const std::size_t blocks = std::size_t{1} << (p.n - low);
    std::vector<std::uint64_t> partial(blocks, 0);
    parallel_blocks(blocks, [&](std::size_t b) {
      walk_block(p, low, b, [&](PointMask, long double v) {
        if (std::abs(v) >= level) ++partial[b];
      });
    });
    for (auto h : partial) hits += h;
    r.samples = std::uint64_t{1} << p.n;
    r.empirical_tail = static_cast<double>(hits) / static_cast<double>(r.samples);
  } else {
    require(trials > 0, ErrorKind::invalid_argument, "Monte Carlo tail needs trials > 0");
    r.norm = std::sqrt(mc_abs_moments(p, 2, trials, derive_seed(seed, 1))[1]);
    const double level = t * r.norm;
    std::vector<std::uint64_t> partial(kMcBlocks, 0);
    parallel_blocks(kMcBlocks, [&](std::size_t b) {
      std::mt19937_64 rng(derive_seed(derive_seed(seed, 2), b));
      const std::uint64_t lo = trials * b / kMcBlocks;
      const std::uint64_t hi = trials * (b + 1) / kMcBlocks;
      const PointMask mask = p.n == 64 ? ~PointMask{0} : (PointMask{1} << p.n) - 1;
      for (std::uint64_t s = lo; s < hi; ++s)
        if (std::abs(p.evaluate(rng() & mask)) >= level) ++partial[b];
    });
    std::uint64_t hits = 0;
    for (auto h : partial) hits += h;
    r.samples = trials;
    r.empirical_tail = static_cast<double>(hits) / static_cast<double>(trials);
  }
  if (r.degree > 0) {
    const double d = r.degree;
    r.k = 2 * static_cast<unsigned>(std::floor(std::pow(t, 2.0 / d) / 4.0));
    r.bound = r.k == 0 ? 1.0 : std::pow(std::pow(static_cast<double>(r.k), d / 2.0) / t, r.k);
    r.applicable = t > std::pow(8.0, d / 2.0);
  }
  r.within_bound = !r.applicable || r.empirical_tail <= r.bound;
  return r;
}

double exact_upper_tail(const DegTwoPoly& p, double threshold) {
  check_exact_size(p.n);
  const unsigned low = default_block_bits(p.n);
  const std::size_t blocks = std::size_t{1} << (p.n - low);
  std::vector<std::uint64_t> partial(blocks, 0);
  parallel_blocks(blocks, [&](std::size_t b) {
    walk_block(p, low, b, [&](PointMask, long double v) {
      if (v > threshold) ++partial[b];
    });
  });
  std::uint64_t hits = 0;
  for (auto h : partial) hits += h;
  return std::ldexp(static_cast<double>(hits), -static_cast<int>(p.n));
}

InvarianceReport invariance_probe(const DegTwoPoly& p, std::uint64_t samples, std::uint64_t seed) {
  require(p.n <= 16, ErrorKind::resource, "invariance probe needs n <= 16");
  require(samples > 0, ErrorKind::invalid_argument, "need at least one Gaussian sample");
  std::vector<double> cube = value_table(p);
  std::sort(cube.begin(), cube.end());

  std::vector<double> gauss(samples);
  parallel_blocks(kMcBlocks, [&](std::size_t b) {
    std::mt19937_64 rng(derive_seed(seed, b));
    std::normal_distribution<double> normal;
    std::vector<double> g(p.n);
    const std::uint64_t lo = samples * b / kMcBlocks;
    const std::uint64_t hi = samples * (b + 1) / kMcBlocks;
    for (std::uint64_t s = lo; s < hi; ++s) {
      for (auto& v : g) v = normal(rng);
      gauss[s] = p.evaluate(g);
    }
  });
  std::sort(gauss.begin(), gauss.end());

  InvarianceReport r;
  r.samples = samples;
  r.seed = seed;
  r.band = std::sqrt(std::log(2.0 / 0.05) / (2.0 * static_cast<double>(samples)));
  const double nc = static_cast<double>(cube.size());
  const double ng = static_cast<double>(gauss.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < cube.size() || j < gauss.size()) {
    double t;
    if (j == gauss.size() || (i < cube.size() && cube[i] <= gauss[j])) {
      t = cube[i];
    } else {
      t = gauss[j];
    }
    while (i < cube.size() && cube[i] <= t) ++i;
    while (j < gauss.size() && gauss[j] <= t) ++j;
    const double gap = std::abs(static_cast<double>(i) / nc - static_cast<double>(j) / ng);
    if (gap > r.distance) {
      r.distance = gap;
      r.argmax = t;
    }
  }
  return r;
}

}  // namespace ptffool
