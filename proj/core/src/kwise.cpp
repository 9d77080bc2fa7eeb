#include "ptffool/kwise.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ptffool {

namespace {

unsigned ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0 : static_cast<unsigned>(std::bit_width(v - 1));
}

}  // namespace

Rational SampleSpace::weight(std::size_t i) const {
  if (weights.empty()) return Rational(1, static_cast<unsigned long>(points.size()));
  return weights[i];
}

void SampleSpace::validate() const {
  require(n >= 1 && n <= 64, ErrorKind::invalid_argument,
          "sample space dimension must be in [1, 64]");
  require(!points.empty(), ErrorKind::invalid_argument, "empty sample space");
  const PointMask mask = n == 64 ? ~PointMask{0} : ((PointMask{1} << n) - 1);
  for (PointMask p : points) {
    require((p & ~mask) == 0, ErrorKind::invalid_argument,
            "point has coordinates outside the declared dimension");
  }
  if (!weights.empty()) {
    require(weights.size() == points.size(), ErrorKind::invalid_argument,
            "weight count does not match point count");
    Rational total = 0;
    for (const auto& w : weights) {
      require(w >= 0, ErrorKind::invalid_argument, "negative weight");
      total += w;
    }
    require(total == 1, ErrorKind::invalid_argument,
            "weights sum to " + to_string(total) + ", not 1");
  }
  if (seed_bits > 0) {
    require(seed_bits < 64 && points.size() == (std::uint64_t{1} << seed_bits),
            ErrorKind::invalid_argument,
            "seed-based space must list 2^seed_bits points");
    require(weights.empty(), ErrorKind::invalid_argument,
            "seed-based space must be uniformly weighted");
  }
}

SampleSpace SampleSpace::normalized() const {
  std::map<PointMask, Rational> acc;
  for (std::size_t i = 0; i < points.size(); ++i) acc[points[i]] += weight(i);
  SampleSpace out;
  out.n = n;
  out.k_claimed = k_claimed;
  for (auto& [p, w] : acc) {
    if (w == 0) continue;
    out.points.push_back(p);
    out.weights.push_back(w);
  }
  return out;
}

std::string to_string(KwiseMethod m) {
  return m == KwiseMethod::vandermonde_bit ? "vandermonde" : "bch";
}

KwiseMethod parse_kwise_method(const std::string& name) {
  if (name == "vandermonde" || name == "vandermonde_bit") return KwiseMethod::vandermonde_bit;
  if (name == "bch" || name == "bch_parity") return KwiseMethod::bch_parity;
  fail(ErrorKind::invalid_argument, "unknown k-wise method: " + name);
}

SeedLayout::SeedLayout(std::vector<unsigned> word_bits) : bits_(std::move(word_bits)) {
  for (unsigned b : bits_) {
    require(b <= 32, ErrorKind::internal, "seed word wider than 32 bits");
    total_ += b;
  }
}

Seed SeedLayout::from_index(std::uint64_t index) const {
  require(total_ <= 63, ErrorKind::resource,
          "seed index addressing needs <= 63 seed bits, have " + std::to_string(total_));
  require(index < (std::uint64_t{1} << total_), ErrorKind::invalid_argument,
          "seed " + std::to_string(index) + " out of range (2^" +
              std::to_string(total_) + " seeds)");
  Seed s;
  s.words.reserve(bits_.size());
  for (unsigned b : bits_) {
    s.words.push_back(static_cast<std::uint32_t>(index & ((std::uint64_t{1} << b) - 1)));
    index >>= b;
  }
  return s;
}

Seed SeedLayout::random(std::mt19937_64& rng) const {
  Seed s;
  s.words.reserve(bits_.size());
  for (unsigned b : bits_) {
    std::uint64_t v = rng();
    s.words.push_back(static_cast<std::uint32_t>(v & ((std::uint64_t{1} << b) - 1)));
  }
  return s;
}

KwiseGenerator::KwiseGenerator(unsigned n, unsigned k, KwiseMethod method)
    : n_(n),
      k_(k),
      method_(method),
      field_([&] {
        require(n >= 1, ErrorKind::invalid_argument, "dimension must be >= 1");
        require(k >= 1, ErrorKind::invalid_order, "independence order must be >= 1");
        require(k <= n, ErrorKind::invalid_order,
                "order k=" + std::to_string(k) + " exceeds dimension n=" + std::to_string(n));
        unsigned m;
        if (method == KwiseMethod::vandermonde_bit) {
          m = std::max(1U, ceil_log2(n));
        } else if (k % 2 == 1) {
          m = std::max(1U, ceil_log2(n));
        } else {
          m = std::max(1U, ceil_log2(std::uint64_t{n} + 1));
        }
        require(m <= 32, ErrorKind::resource, "dimension too large for GF(2^32)");
        return Gf2m(m);
      }()) {
  const unsigned m = field_.degree();
  if (method_ == KwiseMethod::vandermonde_bit) {
    layout_ = SeedLayout(std::vector<unsigned>(k_, m));
    return;
  }
  const unsigned t = k_ / 2;
  leading_parity_ = (k_ % 2 == 1);
  std::vector<unsigned> words;
  if (leading_parity_) words.push_back(1);
  for (unsigned j = 0; j < t; ++j) words.push_back(m);
  layout_ = SeedLayout(std::move(words));
  cols_.resize(n_);
  for (unsigned i = 0; i < n_; ++i) {
    std::uint32_t a = leading_parity_ ? i : i + 1;
    std::uint32_t a2 = field_.mul(a, a);
    std::uint32_t cur = a;
    cols_[i].reserve(t);
    for (unsigned j = 0; j < t; ++j) {
      cols_[i].push_back(cur);
      cur = field_.mul(cur, a2);
    }
  }
}

void KwiseGenerator::bits(const Seed& seed, std::vector<std::uint8_t>& out) const {
  require(seed.words.size() == layout_.word_bits().size(), ErrorKind::invalid_argument,
          "seed does not match generator layout");
  out.resize(n_);
  if (method_ == KwiseMethod::vandermonde_bit) {
    for (unsigned i = 0; i < n_; ++i) {
      std::uint32_t acc = 0;
      for (unsigned j = k_; j-- > 0;) acc = field_.mul(acc, i) ^ seed.words[j];
      out[i] = static_cast<std::uint8_t>(acc & 1U);
    }
    return;
  }
  const std::size_t off = leading_parity_ ? 1 : 0;
  const std::uint8_t lead = leading_parity_ ? static_cast<std::uint8_t>(seed.words[0] & 1U) : 0;
  for (unsigned i = 0; i < n_; ++i) {
    std::uint32_t acc = 0;
    const auto& col = cols_[i];
    for (std::size_t j = 0; j < col.size(); ++j) acc ^= seed.words[off + j] & col[j];
    out[i] = static_cast<std::uint8_t>(lead ^ parity(acc));
  }
}

PointMask KwiseGenerator::point(const Seed& seed) const {
  require(n_ <= 64, ErrorKind::invalid_argument, "point masks need n <= 64");
  std::vector<std::uint8_t> b;
  bits(seed, b);
  PointMask p = 0;
  for (unsigned i = 0; i < n_; ++i) p |= static_cast<PointMask>(b[i]) << i;
  return p;
}

std::vector<PointMask> KwiseGenerator::enumerate(std::uint64_t budget) const {
  require(n_ <= 64, ErrorKind::invalid_argument, "materialized spaces need n <= 64");
  const unsigned sb = seed_bits();
  if (sb >= 63 || (std::uint64_t{1} << sb) > budget) {
    fail(ErrorKind::resource,
         "support size 2^" + std::to_string(sb) + " exceeds budget of " +
             std::to_string(budget) + " points; use the seed-streaming sampler");
  }
  // Linear in the seed bits: point(index) = point(index - lowbit) ^ basis[lowbit].
  std::vector<PointMask> basis(sb);
  for (unsigned b = 0; b < sb; ++b) basis[b] = point(layout_.from_index(std::uint64_t{1} << b));
  const std::uint64_t count = std::uint64_t{1} << sb;
  std::vector<PointMask> pts(count);
  pts[0] = point(layout_.from_index(0));
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    pts[idx] = pts[idx & (idx - 1)] ^ basis[std::countr_zero(idx)];
  }
  return pts;
}

SampleSpace build_kwise_bernoulli(unsigned n, unsigned k, KwiseMethod method) {
  require(k >= 1 && k <= n, ErrorKind::invalid_order,
          "need 1 <= k <= n, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  require(n <= 64, ErrorKind::resource, "materialized spaces support n <= 64");
  KwiseGenerator gen(n, k, method);
  SampleSpace s;
  s.n = n;
  s.k_claimed = k;
  s.seed_bits = gen.seed_bits();
  s.points = gen.enumerate(tolerances().support_budget);
  return s;
}

namespace {

// Common-denominator integer weights: returns (weights, denominator).
std::pair<std::vector<BigInt>, BigInt> scaled_weights(const SampleSpace& space) {
  std::vector<BigInt> w(space.size());
  if (space.uniform_weights()) {
    for (auto& v : w) v = 1;
    return {std::move(w), BigInt(static_cast<unsigned long>(space.size()))};
  }
  BigInt den = 1;
  for (const auto& q : space.weights) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = space.weights[i].get_num() * (den / space.weights[i].get_den());
  }
  return {std::move(w), den};
}

template <class Int>
void record(VerificationReport& r, std::uint64_t subset, const Int& bias_num,
            const BigInt& den, Rational& worst_abs) {
  ++r.subsets_checked;
  if (bias_num == 0) return;
  Rational b{BigInt(bias_num), den};
  b.canonicalize();
  Rational a = abs(b);
  if (!r.worst_subset || a > worst_abs) {
    worst_abs = a;
    r.worst_subset = subset;
    r.worst_bias = b;
  }
}

}  // namespace

VerificationReport verify_kwise_exact(const SampleSpace& space, unsigned k) {
  space.validate();
  require(k >= 1, ErrorKind::invalid_order, "verification order must be >= 1");
  VerificationReport r;
  r.k = k;
  const unsigned n = space.n;
  const unsigned kk = std::min(k, n);
  auto [w, den] = scaled_weights(space);
  Rational worst_abs = 0;

  const bool fits64 = mpz_sizeinbase(den.get_mpz_t(), 2) < 62;
  if (n <= 22) {
    // Histogram + Walsh-Hadamard gives every parity bias at once.
    const std::size_t size = std::size_t{1} << n;
    if (fits64) {
      std::vector<std::int64_t> h(size, 0);
      for (std::size_t i = 0; i < space.size(); ++i) h[space.points[i]] += w[i].get_si();
      walsh_hadamard(std::span<std::int64_t>(h));
      for_each_low_degree_subset(n, kk, [&](std::uint64_t s) {
        record(r, s, BigInt(static_cast<long>(h[s])), den, worst_abs);
      });
    } else {
      std::vector<BigInt> h(size, 0);
      for (std::size_t i = 0; i < space.size(); ++i) h[space.points[i]] += w[i];
      walsh_hadamard(std::span<BigInt>(h));
      for_each_low_degree_subset(n, kk, [&](std::uint64_t s) {
        record(r, s, h[s], den, worst_abs);
      });
    }
  } else {
    for_each_low_degree_subset(n, kk, [&](std::uint64_t s) {
      if (fits64) {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < space.size(); ++i) {
          const std::int64_t wi = w[i].get_si();
          acc += character(space.points[i], s) > 0 ? wi : -wi;
        }
        record(r, s, BigInt(static_cast<long>(acc)), den, worst_abs);
      } else {
        BigInt acc = 0;
        for (std::size_t i = 0; i < space.size(); ++i) {
          if (character(space.points[i], s) > 0) acc += w[i]; else acc -= w[i];
        }
        record(r, s, acc, den, worst_abs);
      }
    });
  }
  r.pass = !r.worst_subset.has_value();
  return r;
}

std::vector<Rational> point_probabilities(const SampleSpace& space) {
  space.validate();
  require(space.n <= 24, ErrorKind::resource, "point probabilities need n <= 24");
  std::vector<Rational> pr(std::size_t{1} << space.n, 0);
  for (std::size_t i = 0; i < space.size(); ++i) pr[space.points[i]] += space.weight(i);
  return pr;
}

PointMask sample(const SampleSpace& space, std::uint64_t seed) {
  require(seed < space.size(), ErrorKind::invalid_argument,
          "seed " + std::to_string(seed) + " out of range (" +
              std::to_string(space.size()) + " seeds)");
  return space.points[seed];
}

void write_space(std::ostream& os, const SampleSpace& space) {
  const bool weighted = !space.uniform_weights();
  os << space.n << ' ' << space.k_claimed << ' ' << space.size() << ' '
     << (weighted ? 1 : 0) << '\n';
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (unsigned j = 0; j < space.n; ++j) {
      if (j) os << ' ';
      os << (((space.points[i] >> j) & 1U) ? "-1" : "1");
    }
    if (weighted) os << ' ' << to_string(space.weights[i]);
    os << '\n';
  }
}

SampleSpace read_space(std::istream& is) {
  SampleSpace s;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  require(next_line(), ErrorKind::parse, "missing sample-space header");
  std::istringstream head(line);
  std::uint64_t count = 0;
  int weighted = 0;
  require(static_cast<bool>(head >> s.n >> s.k_claimed >> count >> weighted) &&
              (weighted == 0 || weighted == 1),
          ErrorKind::parse, "header must be `n k num_points weighted{0,1}`");
  require(s.n >= 1 && s.n <= 64, ErrorKind::parse, "dimension must be in [1, 64]");
  for (std::uint64_t i = 0; i < count; ++i) {
    require(next_line(), ErrorKind::parse,
            "expected " + std::to_string(count) + " points, got " + std::to_string(i));
    std::istringstream ls(line);
    PointMask p = 0;
    for (unsigned j = 0; j < s.n; ++j) {
      int v = 0;
      require(static_cast<bool>(ls >> v) && (v == 1 || v == -1), ErrorKind::parse,
              "point " + std::to_string(i) + ": coordinates must be +1 or -1");
      if (v == -1) p |= PointMask{1} << j;
    }
    s.points.push_back(p);
    if (weighted) {
      std::string tok;
      require(static_cast<bool>(ls >> tok), ErrorKind::parse,
              "point " + std::to_string(i) + ": missing weight");
      s.weights.push_back(parse_rational(tok));
    }
  }
  if (!weighted && count > 0 && std::has_single_bit(count)) {
    // Uniform spaces of size 2^b are treated as seed-based with b seed bits.
    s.seed_bits = static_cast<unsigned>(std::countr_zero(count));
  }
  s.validate();
  return s;
}

void save_space(const std::string& path, const SampleSpace& space) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::invalid_argument, "cannot write " + path);
  write_space(os, space);
}

SampleSpace load_space(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::invalid_argument, "cannot read " + path);
  return read_space(is);
}

}  // namespace ptffool
