#pragma once

#include <cstdint>
#include <random>

namespace psikit {

// Seeded generator with hand-rolled distributions, so streams are identical
// across standard library implementations and across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [lo, hi], inclusive, by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(eng_());  // full range
    const std::uint64_t limit = (~std::uint64_t{0} / span) * span;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return lo + static_cast<std::int64_t>(v % span);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace psikit
