#include <bit>
#include <cmath>

#include <boost/math/special_functions/erf.hpp>

#include "ptffool/kwise.hpp"

namespace ptffool {

namespace {

constexpr std::uint64_t kMinResolution = 16;
constexpr std::size_t kMaxTabulatedPoints = 4096;

unsigned ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0 : static_cast<unsigned>(std::bit_width(v - 1));
}

double log_binomial(std::uint64_t n, std::uint64_t s) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(s) + 1) -
         std::lgamma(static_cast<double>(n - s) + 1);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::invalid_argument, "quantile needs 0 < p < 1");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

std::string to_string(GaussianMethod m) {
  return m == GaussianMethod::binomial_sum ? "binomial_sum" : "inverse_cdf";
}

GaussianMethod parse_gaussian_method(const std::string& name) {
  if (name == "binomial_sum" || name == "binomial") return GaussianMethod::binomial_sum;
  if (name == "inverse_cdf" || name == "inverse") return GaussianMethod::inverse_cdf;
  fail(ErrorKind::invalid_argument, "unknown Gaussian method: " + name);
}

GaussianSpace::GaussianSpace(unsigned n, unsigned k, GaussianMethod method,
                             std::uint64_t resolution)
    : n_(n), k_(k), method_(method), resolution_(resolution) {
  require(n >= 1, ErrorKind::invalid_argument, "dimension must be >= 1");
  require(k >= 1, ErrorKind::invalid_order, "independence order must be >= 1");
  require(resolution >= kMinResolution, ErrorKind::configuration,
          "resolution " + std::to_string(resolution) + " below minimum " +
              std::to_string(kMinResolution));
  if (method == GaussianMethod::inverse_cdf) {
    require(std::has_single_bit(resolution) && resolution <= (std::uint64_t{1} << 32),
            ErrorKind::configuration, "inverse_cdf resolution q must be a power of two <= 2^32");
    level_bits_ = static_cast<unsigned>(std::countr_zero(resolution));
    const unsigned m = std::max(level_bits_, ceil_log2(n));
    require(m <= 32, ErrorKind::resource, "dimension too large for GF(2^32)");
    field_.emplace(m);
    // Any min(k, n) evaluations of a degree < min(k, n) polynomial at distinct
    // points are independent and uniform.
    const unsigned coeffs = std::min(k, n);
    poly_layout_ = SeedLayout(std::vector<unsigned>(coeffs, m));
    if (n <= kMaxTabulatedPoints) {
      point_mul_.reserve(n);
      for (unsigned i = 0; i < n; ++i) point_mul_.emplace_back(*field_, i);
    }
    const double second = marginal_moment(2);
    require(std::abs(second - 1.0) <= tolerances().gaussian_marginal_tol,
            ErrorKind::configuration,
            "inverse_cdf resolution " + std::to_string(resolution) + " gives E[Z^2]=" +
                std::to_string(second) + ", outside tolerance " +
                std::to_string(tolerances().gaussian_marginal_tol));
  } else {
    require(resolution % 2 == 1, ErrorKind::configuration,
            "binomial_sum resolution N must be odd so that Z_i is never 0");
    const std::uint64_t total = std::uint64_t{n} * resolution;
    require(total <= (std::uint64_t{1} << 31), ErrorKind::resource,
            "binomial_sum needs n*N <= 2^31 underlying bits");
    const unsigned order = static_cast<unsigned>(
        std::min<std::uint64_t>(std::uint64_t{2} * k, total));
    // BCH columns cost total * order / 2 words; fall back to polynomial
    // evaluation when that table would be large.
    const bool small = total * (order / 2 + 1) <= (std::uint64_t{1} << 24);
    bits_.emplace(static_cast<unsigned>(total), order,
                  small ? KwiseMethod::bch_parity : KwiseMethod::vandermonde_bit);
  }
}

const SeedLayout& GaussianSpace::layout() const {
  return method_ == GaussianMethod::inverse_cdf ? poly_layout_ : bits_->layout();
}

void GaussianSpace::sample(const Seed& seed, std::vector<double>& out) const {
  out.assign(n_, 0.0);
  if (method_ == GaussianMethod::inverse_cdf) {
    require(seed.words.size() == poly_layout_.word_bits().size(), ErrorKind::invalid_argument,
            "seed does not match Gaussian space layout");
    const unsigned shift = field_->degree() - level_bits_;
    const double q = static_cast<double>(resolution_);
    for (unsigned i = 0; i < n_; ++i) {
      std::uint32_t acc = 0;
      if (!point_mul_.empty()) {
        const auto& mul = point_mul_[i];
        for (std::size_t j = seed.words.size(); j-- > 0;) acc = mul(acc) ^ seed.words[j];
      } else {
        for (std::size_t j = seed.words.size(); j-- > 0;) acc = field_->mul(acc, i) ^ seed.words[j];
      }
      const std::uint64_t u = acc >> shift;
      out[i] = normal_quantile((static_cast<double>(u) + 0.5) / q);
    }
    return;
  }
  std::vector<std::uint8_t> b;
  bits_->bits(seed, b);
  const double scale = 1.0 / std::sqrt(static_cast<double>(resolution_));
  for (unsigned i = 0; i < n_; ++i) {
    long sum = 0;
    const std::size_t base = static_cast<std::size_t>(i) * resolution_;
    for (std::uint64_t j = 0; j < resolution_; ++j) sum += b[base + j] ? -1 : 1;
    out[i] = static_cast<double>(sum) * scale;
  }
}

std::vector<double> GaussianSpace::sample(const Seed& seed) const {
  std::vector<double> out;
  sample(seed, out);
  return out;
}

std::vector<std::pair<double, double>> GaussianSpace::marginal_distribution() const {
  std::vector<std::pair<double, double>> dist;
  if (method_ == GaussianMethod::inverse_cdf) {
    const double q = static_cast<double>(resolution_);
    dist.reserve(resolution_);
    for (std::uint64_t u = 0; u < resolution_; ++u) {
      dist.emplace_back(normal_quantile((static_cast<double>(u) + 0.5) / q), 1.0 / q);
    }
    return dist;
  }
  const std::uint64_t N = resolution_;
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  const double log2n = static_cast<double>(N) * std::log(2.0);
  for (std::uint64_t s = 0; s <= N; ++s) {
    // s coordinates equal to +1.
    double v = (2.0 * static_cast<double>(s) - static_cast<double>(N)) * scale;
    dist.emplace_back(v, std::exp(log_binomial(N, s) - log2n));
  }
  return dist;
}

std::optional<Rational> GaussianSpace::exact_even_moment(unsigned j) const {
  if (method_ != GaussianMethod::binomial_sum || j % 2 != 0 || j > 2 * k_) return std::nullopt;
  const unsigned long N = static_cast<unsigned long>(resolution_);
  BigInt acc = 0;
  BigInt binom = 1;  // C(N, s)
  for (unsigned long s = 0; s <= N; ++s) {
    BigInt v = 2 * static_cast<long>(s) - static_cast<long>(N);
    BigInt p;
    mpz_pow_ui(p.get_mpz_t(), v.get_mpz_t(), j);
    acc += binom * p;
    binom = binom * (N - s) / (s + 1);
  }
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, N);
  BigInt npow;
  mpz_ui_pow_ui(npow.get_mpz_t(), N, j / 2);
  Rational q(acc, den * npow);
  q.canonicalize();
  return q;
}

double GaussianSpace::marginal_moment(unsigned j) const {
  DoubleDouble acc;
  for (const auto& [v, p] : marginal_distribution()) acc.add(p * std::pow(v, static_cast<int>(j)));
  return acc.value();
}

double GaussianSpace::marginal_ks_distance() const {
  double cum = 0.0;
  double worst = 0.0;
  for (const auto& [v, p] : marginal_distribution()) {
    const double phi = normal_cdf(v);
    worst = std::max(worst, std::abs(cum - phi));
    cum += p;
    worst = std::max(worst, std::abs(cum - phi));
  }
  return worst;
}

GaussianSpace build_kwise_gaussian(unsigned n, unsigned k, GaussianMethod method,
                                   std::uint64_t resolution) {
  return GaussianSpace(n, k, method, resolution);
}

}  // namespace ptffool
