#pragma once

#include <cstdint>
#include <random>

namespace symrl {

// Deterministic random stream. Wraps mt19937_64 but derives doubles and
// bounded ints directly from the raw 64-bit output, so sequences are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53 bits of randomness.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Rejection sampling, exactly uniform.
  int uniform_int(int n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (UINT64_MAX / un) * un;
    std::uint64_t x = next_u64();
    while (x >= threshold) x = next_u64();
    return static_cast<int>(x % un);
  }

  double uniform_range(double lo, double hi) { return lo + uniform() * (hi - lo); }

  std::uint64_t seed() const { return seed_; }

  // Independent stream derived from this rng's seed and a stream id.
  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ull + stream))); }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace symrl
