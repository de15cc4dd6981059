#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tempopt {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (seed, stream, substream).
// Simulation paths use stream = path index so the result never depends on
// execution order or thread count.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                              std::uint64_t stream,
                                              std::uint64_t substream = 0) {
  std::uint64_t s = splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return splitmix64(s ^ (0xd1b54a32d192ed03ULL * (substream + 1)));
}

// Deterministic random source. Gaussian draws use Box-Muller on two fresh
// uniforms so every call consumes exactly two engine outputs; the draw
// count per simulated day is therefore fixed, which keeps common-random-
// number scenario legs aligned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : eng_(substream_seed(seed, stream, substream)) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal.
  double normal() {
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tempopt
