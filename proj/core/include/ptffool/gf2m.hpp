#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ptffool {

// Arithmetic in GF(2^m), 1 <= m <= 32, elements as bit vectors of
// polynomial coefficients modulo a fixed primitive polynomial.
class Gf2m {
 public:
  explicit Gf2m(unsigned m);

  unsigned degree() const { return m_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t size() const { return std::uint64_t{1} << m_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

  // Tabulated multiplication by a fixed element (GF(2)-linear map).
  class ConstMultiplier {
   public:
    ConstMultiplier(const Gf2m& field, std::uint32_t c);
    std::uint32_t operator()(std::uint32_t y) const {
      return table_[0][y & 0xff] ^ table_[1][(y >> 8) & 0xff] ^
             table_[2][(y >> 16) & 0xff] ^ table_[3][y >> 24];
    }

   private:
    std::array<std::array<std::uint32_t, 256>, 4> table_{};
  };

 private:
  unsigned m_;
  std::uint64_t modulus_;
};

// Primitive polynomial of degree m (bit m set), 1 <= m <= 32.
std::uint64_t primitive_polynomial(unsigned m);

// Rabin irreducibility test for a GF(2) polynomial given as a bitmask.
bool is_irreducible_gf2(std::uint64_t poly);

}  // namespace ptffool
