#pragma once

#include <cstdint>

// Deterministic, platform-independent random numbers. All stochastic code
// in the library draws from SplitRng so that results depend only on the
// 64-bit seed, never on the standard library's distribution internals.
//
// Seed derivation rule: stream k of master seed s is seeded with
// splitmix64(s XOR (k+1)*GOLDEN). Trials within a scan point use the
// point seed as master in the same way, so any (point, trial) pair maps
// to a unique, reproducible stream.
namespace catspec::rng {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += golden_gamma);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ ((index + 1) * golden_gamma);
  return splitmix64(s);
}

class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace catspec::rng
