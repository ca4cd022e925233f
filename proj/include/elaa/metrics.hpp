#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "elaa/linalg.hpp"
#include "elaa/solvers.hpp"

namespace elaa {

// A packed bit sequence, one byte per bit, values 0 or 1.
struct BitBlock {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
};

// 16-QAM, Gray-labelled per axis, unit mean symbol energy. Bits map in
// groups of four: (b0 b1) select the in-phase level, (b2 b3) the quadrature
// level, with 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3, all scaled by
// 1/sqrt(10).
//
//   bits   level      bits   level
//   00     -3         11     +1
//   01     -1         10     +3
//
// Throws FormatError when the bit count is not a multiple of four or a bit
// is outside {0, 1}.
CVector qam16_modulate(const BitBlock& bits);

// Per-axis threshold decisions at -2/sqrt(10), 0, +2/sqrt(10). Boundary
// values resolve toward the lexicographically smaller bit pair:
//   x <= -2s -> 00,  -2s < x <= 0 -> 01,  0 < x < 2s -> 11,  x >= 2s -> 10.
BitBlock qam16_demodulate(const CVector& symbols);

// Constellation point for each 4-bit pattern (b0 is the most significant).
std::array<cplx, 16> qam16_constellation();

// |A x - b| / |b|; returns +inf when b = 0 but the residual is not.
double relative_residual(const GramSystem& sys, const CVector& x);

// |x - x_star| / |x_star|; +inf when x_star = 0 but x is not.
double relative_error(const CVector& x, const CVector& x_star);

// Fraction of differing bits. Lengths must match.
double ber(const BitBlock& sent, const BitBlock& received);

// First iteration index whose recorded relative residual is <= tol, or
// nullopt when the trace never gets there.
std::optional<std::size_t> iterations_to_tolerance(const IterationTrace& trace,
                                                   double tol);

// Cumulative MAC count at the first record meeting tol.
std::optional<std::uint64_t> macs_to_tolerance(const IterationTrace& trace,
                                               double tol);

}  // namespace elaa
