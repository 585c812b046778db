#pragma once

#include <cstdint>

namespace qperc {

// splitmix64 finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Small sequential generator (splitmix64). One instance per logical stream;
// never shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform real in [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Derived stream for a (master seed, index) pair, e.g. one per trial.
  // Streams are independent of iteration order and thread schedule.
  static Rng stream(std::uint64_t master, std::uint64_t index) {
    return Rng(mix64(mix64(master) ^ index));
  }

 private:
  std::uint64_t state_;
};

// Stateless uniform in [0,1) keyed by (seed, a, b). Used for per-(trial, edge)
// bond weights so that results do not depend on evaluation order.
inline double keyed_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace qperc
