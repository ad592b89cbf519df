#pragma once

#include <cstdint>
#include <random>

namespace alloclab {

// Seeded RNG with hand-rolled value mapping so that sequences are identical
// across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return lo + static_cast<int>(v % span);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace alloclab
