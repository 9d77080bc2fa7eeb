#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptffool/kwise.hpp"
#include "ptffool/poly.hpp"
#include "ptffool/simplex.hpp"

namespace ptffool {

/// E[sgn p] exactly, sgn(0) = +1.
Rational exact_sgn_expectation(const DegTwoPoly& p);
Rational exact_sgn_expectation(const DegTwoPoly& p, const SampleSpace& space);

// Which normalization an objective uses: sgn in {-1,1} or an indicator in
// {0,1}. E[1[p >= 0]] = (1 + E[sgn p]) / 2, so deviations differ by 2.
enum class ObjectiveScale { sign, indicator };

/// Pointwise upper or lower bound q of degree <= k for an objective f on the
/// cube, from LP duality. Coefficients are keyed by subset mask.
struct SandwichCertificate {
  enum class Direction { upper, lower };

  unsigned n = 0;
  unsigned k = 0;
  Direction direction = Direction::upper;
  std::map<std::uint64_t, Rational> coeffs;
  Rational expectation;         // E_U[q], the empty-set coefficient
  Rational target_expectation;  // E_U[f]
  Rational gap;                 // |E_U[q] - E_U[f]|
  Rational slack_added;         // added to the constant to restore soundness
  double lp_gap = 0.0;
  bool pointwise = false;       // exact check on all 2^n points
  bool gap_matches = false;     // |gap - lp_gap| <= certificate_gap_tol

  bool accepted() const { return pointwise && gap_matches; }
};

std::string to_string(SandwichCertificate::Direction d);

struct CertificateCheck {
  bool pointwise = false;
  std::optional<PointMask> violation;  // first failing point
  Rational expectation;
  Rational gap;
};

// Exact verification of q >= f (upper) or q <= f (lower) at every point.
CertificateCheck verify_certificate(const SandwichCertificate& cert, std::span<const std::int8_t> f);

// Text format: `sandwich n k upper|lower`, then `T <p/q> i1 i2 ...` per
// coefficient (1-based, empty for the constant).
void write_certificate(std::ostream& os, const SandwichCertificate& cert);
SandwichCertificate read_certificate(std::istream& is);
void save_certificate(const std::string& path, const SandwichCertificate& cert);
SandwichCertificate load_certificate(const std::string& path);

/// The fooling LP over the 2^n cube points: rows are E[1] = 1 and
/// E[chi_S] = 0 for 1 <= |S| <= k. Pricing is one Walsh-Hadamard transform.
class ParityProgram final : public LinearProgram {
 public:
  // cost[x] per cube point.
  ParityProgram(unsigned n, unsigned k, std::vector<double> cost);

  std::size_t rows() const override { return subsets_.size(); }
  std::size_t cols() const override { return cost_.size(); }
  double cost(std::size_t j) const override { return cost_[j]; }
  double rhs(std::size_t i) const override { return i == 0 ? 1.0 : 0.0; }
  void column(std::size_t j, std::span<double> out) const override;
  void price(std::span<const double> y, std::span<double> out) const override;

  unsigned n() const { return n_; }
  unsigned k() const { return k_; }
  // subsets()[0] == 0 (the normalization row).
  const std::vector<std::uint64_t>& subsets() const { return subsets_; }

 private:
  unsigned n_;
  unsigned k_;
  std::vector<double> cost_;
  std::vector<std::uint64_t> subsets_;
};

std::uint64_t parity_row_count(unsigned n, unsigned k);

enum class Sense { max, min, both };

struct LpOptions {
  Sense sense = Sense::both;
  bool certificates = true;
  bool witnesses = true;
  // Solve again with the columns in a seeded random order and compare.
  std::optional<std::uint64_t> permutation_seed;
  SimplexOptions simplex = default_simplex_options();
};

struct DeviationReport {
  unsigned n = 0;
  unsigned k = 0;
  ObjectiveScale scale = ObjectiveScale::sign;
  Rational uniform_expectation;
  std::optional<Rational> space_expectation;
  std::optional<double> lp_max;
  std::optional<double> lp_min;
  double deviation = 0.0;            // on `scale`
  double sign_deviation = 0.0;       // sgn scale
  double indicator_deviation = 0.0;  // {0,1} scale
  bool inconclusive = false;
  std::string status;
  int iterations = 0;
  std::optional<double> cross_check_max;
  std::optional<double> cross_check_min;
  bool cross_check_agrees = true;
  std::optional<SandwichCertificate> upper;
  std::optional<SandwichCertificate> lower;
  std::optional<SampleSpace> witness_max;
  std::optional<SampleSpace> witness_min;
  std::optional<Rational> witness_max_expectation;
  std::optional<Rational> witness_min_expectation;
  bool witnesses_exact = true;  // every emitted witness is exactly k-wise
};

/// |E_space[sgn p] - E_U[sgn p]|, both exact.
DeviationReport deviation(const DegTwoPoly& p, const SampleSpace& space);

/// Extremes of E_D[f] over all k-wise independent D, for f given per cube
/// point with values in {-1,1} (sign scale) or {0,1} (indicator scale).
DeviationReport worst_case_objective(unsigned n, unsigned k, std::span<const std::int8_t> f,
                                     ObjectiveScale scale, const LpOptions& opt = {});

DeviationReport worst_case_lp(const DegTwoPoly& p, unsigned k, const LpOptions& opt = {});

/// f = AND_i [p_i >= 0] for m <= 3 polynomials on the same cube.
DeviationReport intersection_deviation(std::span<const DegTwoPoly> ps, unsigned k,
                                       const LpOptions& opt = {});

// Certificate from the duals of a solved program, rounded to denominator
// 2^certificate_denominator_log2 and made sound by shifting the constant.
SandwichCertificate sandwich_from_dual(const ParityProgram& lp, const SimplexResult& res,
                                       SandwichCertificate::Direction dir,
                                       std::span<const std::int8_t> f, double lp_value);

// Rounds an LP optimum to a distribution with exactly zero low-degree bias:
// dyadic rounding, projection onto the bias-free subspace, then a uniform
// shift if any weight went negative.
SampleSpace repair_witness(unsigned n, unsigned k, std::span<const double> w);

struct SweepResult {
  std::vector<DeviationReport> reports;  // k = 1..kmax
  bool monotone = true;                  // deviation non-increasing within lp_result_tol
};

SweepResult lp_sweep(const DegTwoPoly& p, unsigned kmax, const LpOptions& opt = {});

enum class ProbeMode { space, gaussian_mc };

struct AnticoncentrationReport {
  ProbeMode mode = ProbeMode::space;
  double probability = 0.0;
  std::optional<Rational> exact;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Scales p so that the nonconstant Fourier mass is 1.
DegTwoPoly normalize_variance(const DegTwoPoly& p);

// Pr[|p(Y) - t| < eps] for Y from a space (exact).
AnticoncentrationReport anticoncentration_probe(const DegTwoPoly& p, double eps, double t,
                                                const SampleSpace& space);
// Same for the multilinear form of p at standard Gaussians, with a 95% CI.
AnticoncentrationReport anticoncentration_probe_gaussian(const DegTwoPoly& p, double eps, double t,
                                                         std::uint64_t samples, std::uint64_t seed);

}  // namespace ptffool
