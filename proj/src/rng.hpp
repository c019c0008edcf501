// Deterministic random streams with engine-portable draw helpers.
#pragma once

#include <cstdint>
#include <random>

namespace casim {

// splitmix64 step; used only to derive substream seeds from a master seed.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent seed for (stream, member) under one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t member = 0) {
  std::uint64_t s = master ^ (stream * 0xA24BAED4963EE407ULL);
  std::uint64_t a = splitmix64_next(s);
  s ^= member * 0x9FB21C651E98DF25ULL;
  std::uint64_t b = splitmix64_next(s);
  return a ^ (b + 0x2545F4914F6CDD1DULL);
}

// mt19937_64 raw output is fully specified by the standard; the uniform
// helpers below avoid std distributions, whose sequences are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Multiply-shift partition of the 64-bit range;
  // bias is below 2^-64 per draw and identical on every platform.
  std::uint64_t uniform_index(std::uint64_t n) {
    const auto wide = static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace casim
