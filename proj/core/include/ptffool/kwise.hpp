#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ptffool/bits.hpp"
#include "ptffool/common.hpp"
#include "ptffool/gf2m.hpp"

namespace ptffool {

/// Explicit weighted support of a distribution over {-1,1}^n (n <= 64).
///
/// An empty `weights` vector means every point carries weight 1/|points|;
/// seed-based constructions always produce that form, with point i being the
/// output for seed i.
struct SampleSpace {
  unsigned n = 0;
  unsigned k_claimed = 0;
  std::vector<PointMask> points;
  std::vector<Rational> weights;
  unsigned seed_bits = 0;  // 0 when the space is not seed-generated

  bool uniform_weights() const { return weights.empty(); }
  std::size_t size() const { return points.size(); }
  Rational weight(std::size_t i) const;

  // Throws on malformed spaces: coordinates outside [n], negative weights,
  // weights not summing to exactly 1, seed/support size mismatch.
  void validate() const;

  // Collapses repeated points and drops zero weights (explicit weights).
  SampleSpace normalized() const;
};

enum class KwiseMethod { vandermonde_bit, bch_parity };

std::string to_string(KwiseMethod m);
KwiseMethod parse_kwise_method(const std::string& name);

/// A seed: little-endian words, word i holding `layout[i]` bits.
struct Seed {
  std::vector<std::uint32_t> words;
};

class SeedLayout {
 public:
  SeedLayout() = default;
  explicit SeedLayout(std::vector<unsigned> word_bits);

  unsigned total_bits() const { return total_; }
  const std::vector<unsigned>& word_bits() const { return bits_; }

  // Seed number `index` (requires total_bits() <= 63): bit b of the index
  // is seed bit b, counted across words from word 0.
  Seed from_index(std::uint64_t index) const;
  Seed random(std::mt19937_64& rng) const;

 private:
  std::vector<unsigned> bits_;
  unsigned total_ = 0;
};

/// Streaming generator of k-wise independent bits. Both constructions are
/// GF(2)-linear in the seed bits.
///
/// vandermonde_bit: a random polynomial of degree k-1 over GF(2^m) evaluated
/// at the field elements 0..n-1; coordinate i is bit 0 of the evaluation.
/// Seed length k*m with m = max(1, ceil(log2 n)).
///
/// bch_parity: coordinate i is the GF(2) inner product of the seed with the
/// column (1, a_i, a_i^3, ..., a_i^(2t-1)) for k = 2t+1 (a_i over all of
/// GF(2^m), m = ceil(log2 n)), or (a_i, a_i^3, ..., a_i^(2t-1)) for k = 2t
/// (a_i nonzero, m = ceil(log2(n+1))). These are the parity-check columns of
/// extended / plain binary BCH codes, any k of which are independent.
class KwiseGenerator {
 public:
  KwiseGenerator(unsigned n, unsigned k, KwiseMethod method);

  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  KwiseMethod method() const { return method_; }
  unsigned field_degree() const { return field_.degree(); }
  const SeedLayout& layout() const { return layout_; }
  unsigned seed_bits() const { return layout_.total_bits(); }

  // Output bits (0 => +1, 1 => -1) for a seed; `out` is resized to n.
  void bits(const Seed& seed, std::vector<std::uint8_t>& out) const;
  // n <= 64 only.
  PointMask point(const Seed& seed) const;

  // Every seed's point in seed order; requires n <= 64 and
  // 2^seed_bits <= budget, else a resource error naming the support size.
  std::vector<PointMask> enumerate(std::uint64_t budget) const;

 private:
  unsigned n_;
  unsigned k_;
  KwiseMethod method_;
  Gf2m field_;
  SeedLayout layout_;
  bool leading_parity_ = false;                  // bch, odd k
  std::vector<std::vector<std::uint32_t>> cols_; // bch columns per coordinate
};

/// build_kwise_bernoulli: explicit k-wise independent space over {-1,1}^n.
SampleSpace build_kwise_bernoulli(unsigned n, unsigned k,
                                  KwiseMethod method = KwiseMethod::vandermonde_bit);

struct VerificationReport {
  bool pass = false;
  unsigned k = 0;
  std::uint64_t subsets_checked = 0;
  std::optional<std::uint64_t> worst_subset;  // absent when every bias is 0
  Rational worst_bias;                         // signed, E[chi_S]
};

/// Zero bias on all parities of size 1..k, in exact integer arithmetic.
VerificationReport verify_kwise_exact(const SampleSpace& space, unsigned k);

/// Exact probability of each point of {-1,1}^n (n <= 24) under the space.
std::vector<Rational> point_probabilities(const SampleSpace& space);

/// Deterministic point for seed index `seed` of a materialized space.
PointMask sample(const SampleSpace& space, std::uint64_t seed);

// Text format: header `n k num_points weighted` then one point per line as
// +-1 integers, followed by `p/q` when weighted is 1.
void write_space(std::ostream& os, const SampleSpace& space);
SampleSpace read_space(std::istream& is);
void save_space(const std::string& path, const SampleSpace& space);
SampleSpace load_space(const std::string& path);

// ---------------------------------------------------------------------------
// Gaussian spaces

enum class GaussianMethod { binomial_sum, inverse_cdf };

std::string to_string(GaussianMethod m);
GaussianMethod parse_gaussian_method(const std::string& name);

/// k-wise independent (approximately) Gaussian vectors in R^n.
///
/// inverse_cdf(q): a degree-(k-1) polynomial over GF(2^m) evaluated at n
/// distinct points gives k-wise independent uniform field elements; the top
/// log2(q) bits select level u and the coordinate is PhiInv((u + 1/2)/q).
///
/// binomial_sum(N), N odd: Z_i = sum_j Y_{i,j} / sqrt(N) over n*N underlying bits
/// that are min(2k, nN)-wise independent, so every joint moment of total
/// degree <= 2k equals its fully independent value.
class GaussianSpace {
 public:
  GaussianSpace(unsigned n, unsigned k, GaussianMethod method,
                std::uint64_t resolution);

  unsigned n() const { return n_; }
  unsigned k_claimed() const { return k_; }
  GaussianMethod method() const { return method_; }
  std::uint64_t resolution() const { return resolution_; }
  const SeedLayout& layout() const;
  unsigned seed_bits() const { return layout().total_bits(); }

  void sample(const Seed& seed, std::vector<double>& out) const;
  std::vector<double> sample(const Seed& seed) const;

  // Marginal value set with probabilities (identical across coordinates).
  std::vector<std::pair<double, double>> marginal_distribution() const;
  // Exact E[Z_i^j] for binomial_sum with j <= 2k (std::nullopt otherwise or
  // for odd j, which are 0 by symmetry).
  std::optional<Rational> exact_even_moment(unsigned j) const;
  double marginal_moment(unsigned j) const;
  // sup_t |P[Z_i <= t] - Phi(t)|.
  double marginal_ks_distance() const;

 private:
  unsigned n_;
  unsigned k_;
  GaussianMethod method_;
  std::uint64_t resolution_;
  // inverse_cdf
  std::optional<Gf2m> field_;
  unsigned level_bits_ = 0;
  SeedLayout poly_layout_;
  std::vector<Gf2m::ConstMultiplier> point_mul_;
  // binomial_sum
  std::optional<KwiseGenerator> bits_;
};

GaussianSpace build_kwise_gaussian(unsigned n, unsigned k, GaussianMethod method,
                                   std::uint64_t resolution);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace ptffool
