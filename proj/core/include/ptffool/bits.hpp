#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

namespace ptffool {

// Points of {-1,1}^n are stored as bitmasks: bit i set means x_i = -1.
using PointMask = std::uint64_t;

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

// chi_S(x) = prod_{i in S} x_i for point mask x and subset mask S.
inline int character(PointMask x, std::uint64_t subset) {
  return parity(x & subset) ? -1 : 1;
}

inline double coordinate(PointMask x, unsigned i) {
  return ((x >> i) & 1U) ? -1.0 : 1.0;
}

// In-place unnormalized Walsh-Hadamard transform over a length-2^n array:
// out[S] = sum_x in[x] * (-1)^{|x & S|}. Works for any ring element type.
template <class T>
void walsh_hadamard(std::span<T> a) {
  const std::size_t n = a.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        T x = a[j];
        T y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

// Next subset of the same popcount (Gosper's hack); returns 0 past the end
// of an n-bit universe.
inline std::uint64_t next_same_popcount(std::uint64_t v, unsigned n) {
  std::uint64_t t = v | (v - 1);
  std::uint64_t w = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  if (n < 64 && (w >> n) != 0) return 0;
  return w;
}

// Calls fn(mask) for every subset S of [n] with 1 <= |S| <= k, ordered by
// size then colex.
template <class Fn>
void for_each_low_degree_subset(unsigned n, unsigned k, Fn&& fn) {
  for (unsigned s = 1; s <= k && s <= n; ++s) {
    std::uint64_t v = (s == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << s) - 1);
    while (v != 0) {
      fn(v);
      if (s == n) break;
      v = next_same_popcount(v, n);
    }
  }
}

}  // namespace ptffool
