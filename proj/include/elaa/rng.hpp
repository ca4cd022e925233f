#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace elaa {

// Finalizer from the splitmix64 generator; used to spread structured seed
// material (seed, trial, role) into independent-looking 64-bit substream
// seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent random roles within one experiment. The values are arbitrary
// fixed tags; changing them changes every derived stream.
enum class StreamRole : std::uint64_t {
  NlosFading = 0x4641444555ull,
  SymbolBits = 0x4249545355ull,
  Noise = 0x4e4f49534555ull,
  Instance = 0x494e535455ull,
};

constexpr std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t trial,
                                       StreamRole role, std::uint64_t extra = 0) {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ trial);
  s = splitmix64(s ^ static_cast<std::uint64_t>(role));
  s = splitmix64(s ^ extra);
  return s;
}

// Deterministic random stream. Uniform and Gaussian draws are implemented
// directly on top of mt19937_64 (whose output sequence is pinned by the
// standard) instead of the std distributions, so streams are bit-identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bit() { return (gen_() >> 63) != 0; }

  // Standard normal via Box-Muller. Draws a pair and discards the sine leg.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  // Circularly symmetric complex normal with unit total variance: real and
  // imaginary parts are independent N(0, 1/2).
  std::complex<double> complex_gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));  // folds in the 1/sqrt(2) scale
    return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  std::mt19937_64 gen_;
};

}  // namespace elaa
