#include "ptffool/gf2m.hpp"

#include <bit>

#include "ptffool/common.hpp"

namespace ptffool {

namespace {

constexpr std::array<std::uint64_t, 33> kPrimitive = {
    0x0,         0x3,        0x7,        0xB,        0x13,       0x25,
    0x43,        0x83,       0x11D,      0x211,      0x409,      0x805,
    0x1053,      0x201B,     0x4443,     0x8003,     0x1100B,    0x20009,
    0x40081,     0x80027,    0x100009,   0x200005,   0x400003,   0x800021,
    0x1000087,   0x2000009,  0x4000047,  0x8000027,  0x10000009, 0x20000005,
    0x40800007,  0x80000009, 0x100400007};

// Carry-less product of two polynomials of degree < 32.
std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t mod) {
  const int dm = std::bit_width(mod) - 1;
  for (int d = std::bit_width(a) - 1; d >= dm; d = std::bit_width(a) - 1) {
    a ^= mod << (d - dm);
  }
  return a;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a = poly_mod(a, b);
    std::swap(a, b);
  }
  return a;
}

// x^(2^e) mod f by repeated squaring.
std::uint64_t x_pow_2e(unsigned e, std::uint64_t f) {
  std::uint64_t r = poly_mod(0x2, f);
  for (unsigned i = 0; i < e; ++i) r = poly_mod(clmul(r, r), f);
  return r;
}

}  // namespace

std::uint64_t primitive_polynomial(unsigned m) {
  require(m >= 1 && m <= 32, ErrorKind::invalid_argument,
          "GF(2^m) supported for 1 <= m <= 32");
  return kPrimitive[m];
}

bool is_irreducible_gf2(std::uint64_t f) {
  if (f < 2) return false;
  const unsigned n = static_cast<unsigned>(std::bit_width(f) - 1);
  if (n == 0) return false;
  if (n > 32) return false;
  if (x_pow_2e(n, f) != poly_mod(0x2, f)) return false;
  for (unsigned p = 2; p <= n; ++p) {
    if (n % p != 0) continue;
    bool prime = true;
    for (unsigned q = 2; q * q <= p; ++q) prime = prime && (p % q != 0);
    if (!prime) continue;
    std::uint64_t h = x_pow_2e(n / p, f) ^ 0x2;
    if (poly_gcd(f, poly_mod(h, f)) != 1) return false;
  }
  return true;
}

Gf2m::Gf2m(unsigned m) : m_(m), modulus_(primitive_polynomial(m)) {}

std::uint32_t Gf2m::mul(std::uint32_t a, std::uint32_t b) const {
  return static_cast<std::uint32_t>(poly_mod(clmul(a, b), modulus_));
}

std::uint32_t Gf2m::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t result = 1;
  std::uint32_t base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Gf2m::ConstMultiplier::ConstMultiplier(const Gf2m& field, std::uint32_t c) {
  for (unsigned byte = 0; byte < 4; ++byte) {
    for (std::uint32_t v = 0; v < 256; ++v) {
      std::uint64_t y = static_cast<std::uint64_t>(v) << (8 * byte);
      table_[byte][v] =
          y >= field.size() ? 0 : field.mul(c, static_cast<std::uint32_t>(y));
    }
  }
}

}  // namespace ptffool
