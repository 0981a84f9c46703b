#include "spectra/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace spectra::gf2 {

namespace {

// Lowest-weight irreducible polynomial per degree (trinomial where one
// exists, otherwise pentanomial).
constexpr uint64_t kModuli[kMaxExponent + 1] = {
    0,          0x3ull,        0x7ull,        0xBull,        0x13ull,
    0x25ull,    0x43ull,       0x83ull,       0x11Bull,      0x203ull,
    0x409ull,   0x805ull,      0x1009ull,     0x201Bull,     0x4021ull,
    0x8003ull,  0x1002Bull,    0x20009ull,    0x40009ull,    0x80027ull,
    0x100009ull, 0x200005ull,  0x400003ull,   0x800021ull,   0x100001Bull,
    0x2000009ull, 0x400001Bull, 0x8000027ull, 0x10000003ull, 0x20000005ull,
    0x40000003ull, 0x80000009ull, 0x10000008Dull,
};

int degree(uint64_t p) { return p == 0 ? -1 : std::bit_width(p) - 1; }

}  // namespace

uint64_t modulus(int a) {
  if (a < 1 || a > kMaxExponent) throw std::invalid_argument("gf2: exponent outside [1,32]");
  return kModuli[a];
}

uint64_t clmul(uint64_t x, uint64_t y) {
  uint64_t acc = 0;
  while (y) {
    if (y & 1ull) acc ^= x;
    x <<= 1;
    y >>= 1;
  }
  return acc;
}

uint64_t poly_mod(uint64_t value, uint64_t divisor) {
  const int dd = degree(divisor);
  if (dd < 0) throw std::invalid_argument("gf2: division by zero polynomial");
  while (degree(value) >= dd) value ^= divisor << (degree(value) - dd);
  return value;
}

bool is_irreducible(uint64_t p) {
  const int n = degree(p);
  if (n < 1) return false;
  if (n == 1) return true;
  if ((p & 1ull) == 0) return false;  // divisible by x
  for (int d = 1; d <= n / 2; ++d)
    for (uint64_t q = 1ull << d; q < (2ull << d); ++q)
      if (poly_mod(p, q) == 0) return false;
  return true;
}

uint32_t multiply(uint32_t x, uint32_t y, int a) {
  const uint64_t mod = modulus(a);
  uint64_t acc = clmul(x, y);
  for (int bit = 2 * a - 2; bit >= a; --bit)
    if ((acc >> bit) & 1ull) acc ^= mod << (bit - a);
  return static_cast<uint32_t>(acc);
}

uint32_t eval_poly(std::span<const uint32_t> coeffs, uint32_t point, int a) {
  uint32_t acc = 0;
  for (size_t i = coeffs.size(); i-- > 0;) acc = multiply(acc, point, a) ^ coeffs[i];
  return acc;
}

}  // namespace spectra::gf2
