#pragma once

// Counter-based deterministic generator (rng_id 1 in the bitstream header).
// Every draw is an independent keyed hash: no sequential state, so detail
// samples can be evaluated in any order or in parallel. Frozen in
// docs/format.md; golden streams depend on these exact constants.

#include <cstdint>

namespace sic::rng {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t value) {
  return mix(state ^ (value + kGamma));
}

// Key for one detail draw: (seed, level, c, h, w, j) -> u64.
constexpr std::uint64_t detail_key(std::uint64_t seed, std::uint64_t level,
                                   std::uint64_t c, std::uint64_t h, std::uint64_t w,
                                   std::uint64_t j) {
  std::uint64_t s = mix(seed + kGamma);
  s = absorb(s, level);
  s = absorb(s, c);
  s = absorb(s, h);
  s = absorb(s, w);
  return absorb(s, j);
}

// [0, 1) via 53-bit mantissa scaling.
constexpr double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Uniform draw on [-2, 2).
constexpr double uniform_m2_2(std::uint64_t key) { return -2.0 + 4.0 * to_unit(key); }

// Tiny sequential stream for solver restarts (not part of any wire format).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }
  double next_unit() { return to_unit(next_u64()); }

 private:
  std::uint64_t state_;
};

}  // namespace sic::rng
