#include "elaa/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace elaa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double level_from_bits(std::uint8_t hi, std::uint8_t lo) {
  // Gray order over {-3, -1, +1, +3}.
  if (hi == 0) return lo == 0 ? -3.0 : -1.0;
  return lo == 1 ? 1.0 : 3.0;
}

void bits_from_level(double v, double s, std::uint8_t& hi, std::uint8_t& lo) {
  if (v <= -2.0 * s) {
    hi = 0;
    lo = 0;
  } else if (v <= 0.0) {
    hi = 0;
    lo = 1;
  } else if (v < 2.0 * s) {
    hi = 1;
    lo = 1;
  } else {
    hi = 1;
    lo = 0;
  }
}

}  // namespace

CVector qam16_modulate(const BitBlock& block) {
  if (block.size() % 4 != 0)
    throw FormatError("qam16_modulate: bit count " + std::to_string(block.size()) +
                      " is not a multiple of 4");
  const double s = 1.0 / std::sqrt(10.0);
  CVector symbols(block.size() / 4);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const std::uint8_t* q = block.bits.data() + 4 * i;
    for (std::size_t k = 0; k < 4; ++k)
      if (q[k] > 1) throw FormatError("qam16_modulate: bit value out of range");
    symbols[i] = {s * level_from_bits(q[0], q[1]), s * level_from_bits(q[2], q[3])};
  }
  return symbols;
}

BitBlock qam16_demodulate(const CVector& symbols) {
  const double s = 1.0 / std::sqrt(10.0);
  BitBlock block;
  block.bits.resize(symbols.size() * 4);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    std::uint8_t* q = block.bits.data() + 4 * i;
    bits_from_level(symbols[i].real(), s, q[0], q[1]);
    bits_from_level(symbols[i].imag(), s, q[2], q[3]);
  }
  return block;
}

std::array<cplx, 16> qam16_constellation() {
  std::array<cplx, 16> points;
  for (std::size_t p = 0; p < 16; ++p) {
    BitBlock block;
    block.bits = {static_cast<std::uint8_t>((p >> 3) & 1),
                  static_cast<std::uint8_t>((p >> 2) & 1),
                  static_cast<std::uint8_t>((p >> 1) & 1),
                  static_cast<std::uint8_t>(p & 1)};
    points[p] = qam16_modulate(block)[0];
  }
  return points;
}

double relative_residual(const GramSystem& sys, const CVector& x) {
  const double rn = vec_norm(vec_sub(matvec(sys.a, x), sys.b));
  const double bn = vec_norm(sys.b);
  if (bn > 0.0) return rn / bn;
  return rn == 0.0 ? 0.0 : kInf;
}

double relative_error(const CVector& x, const CVector& x_star) {
  const double en = vec_norm(vec_sub(x, x_star));
  const double sn = vec_norm(x_star);
  if (sn > 0.0) return en / sn;
  return en == 0.0 ? 0.0 : kInf;
}

double ber(const BitBlock& sent, const BitBlock& received) {
  if (sent.size() != received.size())
    throw DimensionError("ber: bit block lengths differ");
  if (sent.size() == 0) throw FormatError("ber: empty bit blocks");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < sent.size(); ++i)
    diff += sent.bits[i] != received.bits[i];
  return static_cast<double>(diff) / static_cast<double>(sent.size());
}

std::optional<std::size_t> iterations_to_tolerance(const IterationTrace& trace,
                                                   double tol) {
  for (const IterationRecord& rec : trace.records)
    if (rec.rel_residual <= tol) return rec.iter;
  return std::nullopt;
}

std::optional<std::uint64_t> macs_to_tolerance(const IterationTrace& trace,
                                               double tol) {
  for (const IterationRecord& rec : trace.records)
    if (rec.rel_residual <= tol) return rec.cum_macs;
  return std::nullopt;
}

}  // namespace elaa
