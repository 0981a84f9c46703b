// Arithmetic in GF(2^a) for a in [1, 32], on bit-packed polynomials.
// Field elements are the integers in [0, 2^a); bit i is the coefficient of
// x^i. Multiplication is carry-less followed by reduction modulo a fixed
// irreducible polynomial per exponent.

#pragma once

#include <cstdint>
#include <span>

namespace spectra::gf2 {

constexpr int kMaxExponent = 32;

// The modulus for GF(2^a), including the leading x^a bit. Throws for a
// outside [1, 32]. Every table entry is covered by an irreducibility
// self-test (exhaustive trial division).
uint64_t modulus(int a);

// Carry-less product of two bit-polynomials (no reduction).
uint64_t clmul(uint64_t x, uint64_t y);

// Remainder of bit-polynomial division.
uint64_t poly_mod(uint64_t value, uint64_t divisor);

// Trial division by every polynomial of degree 1..deg(p)/2.
bool is_irreducible(uint64_t p);

uint32_t multiply(uint32_t x, uint32_t y, int a);

// Horner evaluation of sum_i coeffs[i] * point^i in GF(2^a).
uint32_t eval_poly(std::span<const uint32_t> coeffs, uint32_t point, int a);

}  // namespace spectra::gf2
