#pragma once

#include <cstdint>

namespace zdforge {

// Counter-based generator (splitmix64): the state advances by a fixed
// increment and every output is an independent mix of the counter, so the
// stream for seed s and the stream for seed s+1 are decorrelated. Substreams
// are derived by adding an index to the base seed. All draws are built from
// the top 53 bits, which keeps results bit-identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

}  // namespace zdforge
