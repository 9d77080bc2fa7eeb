#include "ptffool/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace ptffool {

SymMatrix SymMatrix::from_dense(unsigned n, std::span<const double> dense) {
  require(dense.size() == std::size_t{n} * n, ErrorKind::invalid_argument,
          "dense matrix has wrong size");
  SymMatrix m(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i; j < n; ++j) {
      require(dense[i * n + j] == dense[j * n + i], ErrorKind::contract_violation,
              "matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      m.set(i, j, dense[i * n + j]);
    }
  }
  return m;
}

SymMatrix SymMatrix::identity(unsigned n) {
  SymMatrix m(n);
  for (unsigned i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  SymMatrix m(static_cast<unsigned>(d.size()));
  for (unsigned i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

std::vector<double> SymMatrix::to_dense() const {
  std::vector<double> out(std::size_t{n_} * n_);
  for (unsigned i = 0; i < n_; ++i)
    for (unsigned j = 0; j < n_; ++j) out[i * n_ + j] = (*this)(i, j);
  return out;
}

double SymMatrix::frobenius() const {
  DoubleDouble acc;
  for (unsigned i = 0; i < n_; ++i) {
    for (unsigned j = i; j < n_; ++j) {
      const double v = (*this)(i, j);
      acc.add((i == j ? 1.0 : 2.0) * v * v);
    }
  }
  return std::sqrt(acc.value());
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (unsigned i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

bool SymMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

double SymMatrix::quadratic_form(std::span<const double> x) const {
  require(x.size() == n_, ErrorKind::invalid_argument, "vector length mismatch");
  double acc = 0.0;
  for (unsigned i = 0; i < n_; ++i) {
    double row = (*this)(i, i) * x[i];
    for (unsigned j = i + 1; j < n_; ++j) row += 2.0 * (*this)(i, j) * x[j];
    acc += row * x[i];
  }
  return acc;
}

double SymMatrix::max_abs_diff(const SymMatrix& other) const {
  require(other.n_ == n_, ErrorKind::invalid_argument, "matrix size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  require(o.n_ == n_, ErrorKind::invalid_argument, "matrix size mismatch");
  SymMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  require(o.n_ == n_, ErrorKind::invalid_argument, "matrix size mismatch");
  SymMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

SymMatrix SymMatrix::operator*(double s) const {
  SymMatrix r = *this;
  for (auto& v : r.data_) v *= s;
  return r;
}

void DegTwoPoly::add_term(unsigned i, unsigned j, double coef) {
  require(i < n && j < n, ErrorKind::invalid_argument, "variable index out of range");
  if (i == j) {
    quad.add(i, i, coef);
  } else {
    quad.add(i, j, coef / 2.0);
  }
}

double DegTwoPoly::evaluate(std::span<const double> x) const {
  require(x.size() == n, ErrorKind::invalid_argument, "point dimension mismatch");
  double v = constant;
  for (unsigned i = 0; i < n; ++i) v += linear[i] * x[i];
  return v + quad.quadratic_form(x);
}

double DegTwoPoly::evaluate(PointMask x) const {
  double v = constant;
  for (unsigned i = 0; i < n; ++i) {
    const double xi = coordinate(x, i);
    double row = quad(i, i);
    for (unsigned j = i + 1; j < n; ++j) row += 2.0 * quad(i, j) * xi * coordinate(x, j);
    v += linear[i] * xi + row;
  }
  return v;
}

DegTwoPoly DegTwoPoly::scaled(double s) const {
  DegTwoPoly r = *this;
  r.constant *= s;
  for (auto& v : r.linear) v *= s;
  r.quad = quad * s;
  return r;
}

Multilinearization multilinearize(const DegTwoPoly& p) {
  Multilinearization m{p, 0.0};
  for (unsigned i = 0; i < p.n; ++i) {
    m.folded += p.quad(i, i);
    m.poly.quad.set(i, i, 0.0);
  }
  m.poly.constant += m.folded;
  return m;
}

double FourierExpansion::sum_squares(bool include_empty) const {
  DoubleDouble acc;
  for (const auto& [s, c] : coeffs) {
    if (s == 0 && !include_empty) continue;
    acc.add(c * c);
  }
  return acc.value();
}

FourierExpansion to_fourier(const DegTwoPoly& p) {
  require(p.n <= 64, ErrorKind::invalid_argument, "Fourier view needs n <= 64");
  FourierExpansion f;
  f.n = p.n;
  const double empty = p.constant + p.quad.trace();
  if (empty != 0.0) f.coeffs[0] = empty;
  for (unsigned i = 0; i < p.n; ++i) {
    if (p.linear[i] != 0.0) f.coeffs[std::uint64_t{1} << i] = p.linear[i];
    for (unsigned j = i + 1; j < p.n; ++j) {
      const double c = 2.0 * p.quad(i, j);
      if (c != 0.0) f.coeffs[(std::uint64_t{1} << i) | (std::uint64_t{1} << j)] = c;
    }
  }
  return f;
}

DegTwoPoly from_fourier(const FourierExpansion& f) {
  DegTwoPoly p(f.n);
  for (const auto& [s, c] : f.coeffs) {
    const int deg = std::popcount(s);
    require(deg <= 2, ErrorKind::invalid_argument, "Fourier expansion has degree > 2");
    require(f.n == 64 || (s >> f.n) == 0, ErrorKind::invalid_argument,
            "Fourier subset outside the dimension");
    if (deg == 0) {
      p.constant += c;
    } else if (deg == 1) {
      p.linear[std::countr_zero(s)] += c;
    } else {
      const unsigned i = static_cast<unsigned>(std::countr_zero(s));
      const unsigned j = static_cast<unsigned>(63 - std::countl_zero(s));
      p.quad.add(i, j, c / 2.0);
    }
  }
  return p;
}

InfluenceReport influences(const DegTwoPoly& p) {
  InfluenceReport r;
  r.influence.assign(p.n, 0.0);
  for (unsigned i = 0; i < p.n; ++i) {
    DoubleDouble acc;
    acc.add(p.linear[i] * p.linear[i]);
    for (unsigned j = 0; j < p.n; ++j) {
      if (j == i) continue;
      const double c = 2.0 * p.quad(i, j);
      acc.add(c * c);
    }
    r.influence[i] = acc.value();
  }
  DoubleDouble total;
  for (double v : r.influence) total.add(v);
  r.total = total.value();
  return r;
}

RegularityReport regularity(const DegTwoPoly& p, double tau) {
  const auto inf = influences(p);
  require(inf.total > 0.0, ErrorKind::degenerate_input,
          "regularity undefined for a polynomial with zero total influence");
  RegularityReport r;
  for (unsigned i = 0; i < p.n; ++i) {
    const double ratio = inf.influence[i] / inf.total;
    if (ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.argmax = i;
    }
  }
  r.is_regular = r.max_ratio <= tau;
  return r;
}

CriticalIndex critical_index_of(std::span<const double> influence, double tau) {
  CriticalIndex ci;
  const std::size_t n = influence.size();
  ci.order.resize(n);
  std::iota(ci.order.begin(), ci.order.end(), 0U);
  std::stable_sort(ci.order.begin(), ci.order.end(),
                   [&](unsigned a, unsigned b) { return influence[a] > influence[b]; });
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + influence[ci.order[i]];
  require(suffix[0] > 0.0, ErrorKind::degenerate_input,
          "critical index undefined for a polynomial with zero total influence");
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n; ++i) nonzero += influence[ci.order[i]] > 0.0 ? 1 : 0;
  ci.ratios.resize(n + 1, 0.0);
  bool found = false;
  for (std::size_t i = 0; i <= n; ++i) {
    const double num = i < n ? influence[ci.order[i]] : 0.0;
    ci.ratios[i] = num == 0.0 ? 0.0 : num / suffix[i];
    if (!found && ci.ratios[i] <= tau) {
      ci.index = i;
      found = true;
    }
  }
  ci.ratios.resize(std::min(n + 1, nonzero + 1));
  ci.infinite = ci.index == nonzero;
  return ci;
}

CriticalIndex critical_index(const DegTwoPoly& p, double tau) {
  const auto inf = influences(p);
  return critical_index_of(inf.influence, tau);
}

DegTwoPoly restrict_variable(const DegTwoPoly& p, unsigned var, int value) {
  require(var < p.n, ErrorKind::invalid_argument, "variable index out of range");
  require(value == 1 || value == -1, ErrorKind::invalid_argument, "restriction value must be +-1");
  const double s = value;
  DegTwoPoly r = p;
  r.constant += p.linear[var] * s + p.quad(var, var);
  r.linear[var] = 0.0;
  for (unsigned j = 0; j < p.n; ++j) {
    if (j == var) continue;
    r.linear[j] += 2.0 * p.quad(var, j) * s;
    r.quad.set(var, j, 0.0);
  }
  r.quad.set(var, var, 0.0);
  return r;
}

void write_poly(std::ostream& os, const DegTwoPoly& p) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << p.n << '\n';
  os << "C " << num(p.constant) << '\n';
  for (unsigned i = 0; i < p.n; ++i) {
    if (p.linear[i] != 0.0) os << "L " << i + 1 << ' ' << num(p.linear[i]) << '\n';
  }
  for (unsigned i = 0; i < p.n; ++i) {
    for (unsigned j = i; j < p.n; ++j) {
      const double a = i == j ? p.quad(i, i) : 2.0 * p.quad(i, j);
      if (a != 0.0) os << "Q " << i + 1 << ' ' << j + 1 << ' ' << num(a) << '\n';
    }
  }
}

DegTwoPoly read_poly(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++lineno;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
  require(next_line(), ErrorKind::parse, "missing dimension line");
  long n = 0;
  {
    std::istringstream ls(line);
    require(static_cast<bool>(ls >> n) && n >= 1, ErrorKind::parse,
            where() + "first line must be the dimension n >= 1");
  }
  DegTwoPoly p(static_cast<unsigned>(n));
  auto index = [&](long i) {
    require(i >= 1 && i <= n, ErrorKind::parse, where() + "index out of range 1.." + std::to_string(n));
    return static_cast<unsigned>(i - 1);
  };
  while (next_line()) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "C") {
      double v;
      require(static_cast<bool>(ls >> v), ErrorKind::parse, where() + "expected `C value`");
      p.constant += v;
    } else if (tag == "L") {
      long i;
      double v;
      require(static_cast<bool>(ls >> i >> v), ErrorKind::parse, where() + "expected `L i value`");
      p.linear[index(i)] += v;
    } else if (tag == "Q") {
      long i, j;
      double v;
      require(static_cast<bool>(ls >> i >> j >> v), ErrorKind::parse,
              where() + "expected `Q i j value`");
      require(i <= j, ErrorKind::parse, where() + "quadratic terms need i <= j");
      p.add_term(index(i), index(j), v);
    } else {
      fail(ErrorKind::parse, where() + "unknown record `" + tag + "`");
    }
  }
  return p;
}

void save_poly(const std::string& path, const DegTwoPoly& p) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::invalid_argument, "cannot write " + path);
  write_poly(os, p);
}

DegTwoPoly load_poly(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::invalid_argument, "cannot read " + path);
  return read_poly(is);
}

}  // namespace ptffool
