#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "ptffool/poly.hpp"

namespace ptffool {

/// Incremental evaluation of a degree-2 polynomial along a walk on the cube.
/// Flipping x_i changes p by -2 x_i (L_i + 2 sum_{j != i} A_ij x_j); the
/// partial sums are kept in long double and updated in O(n) per flip.
class GrayWalker {
 public:
  GrayWalker(const DegTwoPoly& p, PointMask start);

  PointMask point() const { return x_; }
  long double value() const { return value_; }
  void flip(unsigned i);

 private:
  unsigned n_;
  std::vector<double> off_;  // dense 2*A with zero diagonal
  std::vector<double> lin_;
  std::vector<long double> field_;  // L_i + sum_{j != i} 2 A_ij x_j
  PointMask x_;
  long double value_;
};

// The cube is split into 2^(n - low_bits) blocks of 2^low_bits points; block
// b covers the points whose high bits equal b.
unsigned default_block_bits(unsigned n);

// fn(mask, value) over one block in Gray-code order.
template <class Fn>
void walk_block(const DegTwoPoly& p, unsigned low_bits, std::uint64_t block, Fn&& fn) {
  const PointMask base = block << low_bits;
  GrayWalker w(p, base);
  fn(w.point(), w.value());
  const std::uint64_t count = std::uint64_t{1} << low_bits;
  for (std::uint64_t g = 1; g < count; ++g) {
    w.flip(static_cast<unsigned>(std::countr_zero(g)));
    fn(w.point(), w.value());
  }
}

// Exact sign of p at a cube point (sgn(0) = +1). Uses a floating filter and
// falls back to rational evaluation near zero.
int exact_sign(const DegTwoPoly& p, PointMask x);

// Values / signs at every point, indexed by mask (n <= 24).
std::vector<double> value_table(const DegTwoPoly& p);
std::vector<std::int8_t> sign_table(const DegTwoPoly& p);

}  // namespace ptffool
