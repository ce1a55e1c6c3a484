#pragma once

#include <cstdint>

namespace drmpc {

// splitmix64; used everywhere randomness is needed so runs are reproducible
// from a single master seed on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
};

// Stable combination of a master seed with a stream tag (day index, run
// index, ...). Distinct tags give statistically independent streams.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag) {
  SplitMix64 rng(master ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
  return rng.next_u64();
}

}  // namespace drmpc
