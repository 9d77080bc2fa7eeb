#include "ptffool/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <variant>

namespace ptffool {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_order: return "invalid-order";
    case ErrorKind::resource: return "resource";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::contract_violation: return "contract-violation";
    case ErrorKind::decomposition_corruption: return "decomposition-corruption";
    case ErrorKind::tolerance: return "tolerance";
    case ErrorKind::inconclusive: return "inconclusive";
    case ErrorKind::parse: return "parse";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

Tolerances& tolerances() {
  static Tolerances instance;
  return instance;
}

namespace {

using Field = std::variant<double Tolerances::*, int Tolerances::*,
                           unsigned Tolerances::*, std::uint64_t Tolerances::*>;

struct NamedField {
  const char* name;
  Field field;
};

#define PTFFOOL_FIELD(f) NamedField{#f, &Tolerances::f}

const std::vector<NamedField>& fields() {
  static const std::vector<NamedField> table = {
      PTFFOOL_FIELD(support_budget),
      PTFFOOL_FIELD(gaussian_marginal_tol),
      PTFFOOL_FIELD(gaussian_default_log2_q),
      PTFFOOL_FIELD(jacobi_rel_offdiag),
      PTFFOOL_FIELD(jacobi_max_sweeps),
      PTFFOOL_FIELD(eigen_tie),
      PTFFOOL_FIELD(mp_clamp),
      PTFFOOL_FIELD(mp_corrupt),
      PTFFOOL_FIELD(reconstruct),
      PTFFOOL_FIELD(zero_eigen_rel),
      PTFFOOL_FIELD(eigenbound_constant),
      PTFFOOL_FIELD(exact_max_n),
      PTFFOOL_FIELD(exact_max_k),
      PTFFOOL_FIELD(unit_integral_tol),
      PTFFOOL_FIELD(bhat_agree_tol),
      PTFFOOL_FIELD(xalpha_rel_tol),
      PTFFOOL_FIELD(boundary_half_tol),
      PTFFOOL_FIELD(inconclusive_tail_fraction),
      PTFFOOL_FIELD(lp_feasibility),
      PTFFOOL_FIELD(lp_optimality),
      PTFFOOL_FIELD(lp_pivot),
      PTFFOOL_FIELD(lp_max_iterations),
      PTFFOOL_FIELD(lp_refactor_interval),
      PTFFOOL_FIELD(lp_stall_window),
      PTFFOOL_FIELD(lp_result_tol),
      PTFFOOL_FIELD(certificate_gap_tol),
      PTFFOOL_FIELD(certificate_denominator_log2),
      PTFFOOL_FIELD(lp_max_n),
      PTFFOOL_FIELD(lp_max_rows),
      PTFFOOL_FIELD(tree_independence_constant),
      PTFFOOL_FIELD(tree_max_leaves_log2),
      PTFFOOL_FIELD(tree_depth_cap),
      PTFFOOL_FIELD(gw_unit_norm),
      PTFFOOL_FIELD(gw_k_constant),
      PTFFOOL_FIELD(kwise_fools_B),
  };
  return table;
}

#undef PTFFOOL_FIELD

}  // namespace

bool set_tolerance(std::string_view name, double value) {
  auto& t = tolerances();
  for (const auto& f : fields()) {
    if (name != f.name) continue;
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(t.*member)>;
          t.*member = static_cast<T>(value);
        },
        f.field);
    return true;
  }
  return false;
}

std::vector<std::pair<std::string, double>> list_tolerances() {
  const auto& t = tolerances();
  std::vector<std::pair<std::string, double>> out;
  for (const auto& f : fields()) {
    double v = std::visit(
        [&](auto member) { return static_cast<double>(t.*member); }, f.field);
    out.emplace_back(f.name, v);
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

unsigned worker_count() {
  if (const char* env = std::getenv("PTF_FOOL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_blocks(std::size_t blocks,
                     const std::function<void(std::size_t)>& body) {
  unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(worker_count(), blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> errored{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t b = next.fetch_add(1);
        if (b >= blocks || errored.load()) return;
        try {
          body(b);
        } catch (...) {
          if (!errored.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}
}  // namespace

void DoubleDouble::add(double v) {
  double s, e;
  two_sum(hi_, v, s, e);
  e += lo_;
  two_sum(s, e, hi_, lo_);
}

void DoubleDouble::add(const DoubleDouble& o) {
  double s, e;
  two_sum(hi_, o.hi_, s, e);
  e += lo_ + o.lo_;
  two_sum(s, e, hi_, lo_);
}

Rational to_rational(double v) {
  require(std::isfinite(v), ErrorKind::invalid_argument,
          "cannot convert non-finite value to a rational");
  Rational q(v);  // mpq_set_d is exact for finite doubles
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  require(!s.empty(), ErrorKind::parse, "empty rational literal");
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s, 10);
      q.canonicalize();
      require(q.get_den() != 0, ErrorKind::parse, "zero denominator in " + s);
      return q;
    }
    auto epos = s.find_first_of("eE");
    std::string mant = s.substr(0, epos);
    long exp10 = 0;
    if (epos != std::string::npos) exp10 = std::stol(s.substr(epos + 1));
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    if (dot != std::string::npos) {
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
      exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    require(!digits.empty() &&
                digits.find_first_not_of("0123456789") == std::string::npos,
            ErrorKind::parse, "malformed number: " + s);
    BigInt num(digits, 10);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rational q = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::parse, "malformed number: " + s);
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace ptffool
