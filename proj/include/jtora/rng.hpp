#pragma once

// Deterministic random number generation for scenario draws.
//
// All randomness in this project flows through splitmix64 (Steele, Lea &
// Flood, "Fast splittable pseudorandom number generators", OOPSLA 2014):
// a 64-bit Weyl sequence with increment 0x9E3779B97F4A7C15 followed by a
// mix (xor-shift-multiply) finalizer. Normals come from Box-Muller. The
// algorithm is spelled out here rather than taken from <random> so that a
// scenario is reproducible for a given (config, seed) regardless of the
// standard-library implementation, and so the draw structure can be
// mirrored in another language if needed.

#include <cmath>
#include <cstdint>

namespace jtora {

namespace detail {

// splitmix64 finalizer: xor-shift / multiply / xor-shift / multiply / xor-shift.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

// The i-th output of a splitmix64 generator seeded with `master`. Used to
// derive independent sub-stream seeds (per drop, per purpose) in constant
// time; adding consumers never perturbs existing streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return detail::mix64(master + (index + 1) * detail::kGolden);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the sine partner is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - next_double();  // (0, 1]
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, n) by scaling; n is tiny here (sub-band counts)
  // so the modulo-free scaling bias is negligible and deterministic.
  int next_below(int n) {
    int v = static_cast<int>(next_double() * n);
    return v < n ? v : n - 1;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace jtora
