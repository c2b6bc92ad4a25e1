#pragma once

#include <cstdint>

namespace rcm {

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; a bijection on 64-bit words.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

// Counter-based stream: draw j of walker w under seed s is a pure function of (s, w, j).
class WalkerStream {
 public:
  using result_type = uint64_t;

  WalkerStream(uint64_t seed, uint64_t walker_id)
      : key_(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + walker_id * kGolden + 0x14057b7ef767814fULL)) {}

  uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }
  double uniform() { return to_unit(next_u64()); }
  uint64_t counter() const { return counter_; }

  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return ~uint64_t(0); }
  uint64_t operator()() { return next_u64(); }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace rcm
