#include "ptffool/hypercube.hpp"

#include <cmath>

namespace ptffool {

GrayWalker::GrayWalker(const DegTwoPoly& p, PointMask start)
    : n_(p.n), off_(std::size_t{p.n} * p.n, 0.0), lin_(p.linear), field_(p.n), x_(start) {
  for (unsigned i = 0; i < n_; ++i)
    for (unsigned j = 0; j < n_; ++j)
      if (i != j) off_[std::size_t{i} * n_ + j] = 2.0 * p.quad(i, j);
  long double v = static_cast<long double>(p.constant) + p.quad.trace();
  for (unsigned i = 0; i < n_; ++i) {
    long double f = lin_[i];
    for (unsigned j = 0; j < n_; ++j) f += off_[std::size_t{i} * n_ + j] * coordinate(x_, j);
    field_[i] = f;
  }
  for (unsigned i = 0; i < n_; ++i) {
    const double xi = coordinate(x_, i);
    v += lin_[i] * xi;
    for (unsigned j = i + 1; j < n_; ++j) v += off_[std::size_t{i} * n_ + j] * xi * coordinate(x_, j);
  }
  value_ = v;
}

void GrayWalker::flip(unsigned i) {
  const double xi = coordinate(x_, i);
  value_ -= 2.0L * xi * field_[i];
  const double* row = &off_[std::size_t{i} * n_];
  for (unsigned j = 0; j < n_; ++j) field_[j] -= 2.0L * row[j] * xi;
  x_ ^= PointMask{1} << i;
}

unsigned default_block_bits(unsigned n) { return n > 6 ? n - 6 : 0; }

namespace {

double magnitude(const DegTwoPoly& p) {
  double m = std::abs(p.constant);
  for (double v : p.linear) m += std::abs(v);
  for (unsigned i = 0; i < p.n; ++i)
    for (unsigned j = i; j < p.n; ++j) m += (i == j ? 1.0 : 2.0) * std::abs(p.quad(i, j));
  return m;
}

int rational_sign(const DegTwoPoly& p, PointMask x) {
  Rational v = to_rational(p.constant);
  for (unsigned i = 0; i < p.n; ++i) {
    const int xi = coordinate(x, i) > 0 ? 1 : -1;
    v += to_rational(p.linear[i]) * xi;
    v += to_rational(p.quad(i, i));
    for (unsigned j = i + 1; j < p.n; ++j) {
      const int xj = coordinate(x, j) > 0 ? 1 : -1;
      v += to_rational(p.quad(i, j)) * (2 * xi * xj);
    }
  }
  return sgn(v) < 0 ? -1 : 1;
}

}  // namespace

int exact_sign(const DegTwoPoly& p, PointMask x) {
  const long double v = p.evaluate(x);
  if (std::abs(v) > 1e-9L * magnitude(p)) return v < 0 ? -1 : 1;
  return rational_sign(p, x);
}

std::vector<double> value_table(const DegTwoPoly& p) {
  require(p.n <= 24, ErrorKind::resource, "value table needs n <= 24");
  std::vector<double> out(std::size_t{1} << p.n);
  const unsigned low = default_block_bits(p.n);
  const std::size_t blocks = std::size_t{1} << (p.n - low);
  parallel_blocks(blocks, [&](std::size_t b) {
    walk_block(p, low, b, [&](PointMask x, long double v) { out[x] = static_cast<double>(v); });
  });
  return out;
}

std::vector<std::int8_t> sign_table(const DegTwoPoly& p) {
  require(p.n <= 24, ErrorKind::resource, "sign table needs n <= 24");
  std::vector<std::int8_t> out(std::size_t{1} << p.n);
  const double filter = 1e-9 * magnitude(p);
  const unsigned low = default_block_bits(p.n);
  const std::size_t blocks = std::size_t{1} << (p.n - low);
  parallel_blocks(blocks, [&](std::size_t b) {
    walk_block(p, low, b, [&](PointMask x, long double v) {
      if (std::abs(v) > filter) {
        out[x] = v < 0 ? -1 : 1;
      } else {
        out[x] = static_cast<std::int8_t>(rational_sign(p, x));
      }
    });
  });
  return out;
}

}  // namespace ptffool
