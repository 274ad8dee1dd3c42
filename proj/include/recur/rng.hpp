#pragma once

// Deterministic random number plumbing. All simulation streams are derived
// from a single user seed through splitmix64 mixing, so that a (seed, offset)
// pair always produces the same symbol stream on every platform and compiler.

#include <cstdint>

namespace recur {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent engine seed for stream `offset` of a run.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t offset) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (offset * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

// xoshiro256++ (Blackman & Vigna, public domain). Used instead of
// std::mt19937_64 on the symbol-emission hot path; the sequence is fixed by
// this implementation, not by the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace recur
