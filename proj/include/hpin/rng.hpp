#pragma once

// Counter-based splittable RNG.  Every stream is a pure function of its
// coordinate path (seed -> child words), so any sample in the toolkit is
// reproducible independently of thread count or evaluation order.
//
// The generator is SplitMix64 (Steele/Lea/Flood; Vigna's fixed-increment
// variant): output i of a stream with key k is mix64(k + (i+1)*GOLDEN).

#include <cmath>
#include <cstdint>

namespace hpin {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  static RngStream root(std::uint64_t seed) {
    return RngStream(mix64(seed + kGolden));
  }

  // Derived stream for coordinate word w; children of distinct words are
  // distinct (mix64 is a bijection and the absorption is injective per key).
  RngStream child(std::uint64_t w) const {
    return RngStream(mix64(key_ ^ mix64(w + kGolden)));
  }

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGolden); }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log argument.
  double next_unit_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch); always consumes exactly
  // two outputs, which keeps every stream's draw count coordinate-stable.
  double next_normal() {
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Unbiased-enough index in [0, m): multiply-shift on the top 64 bits.
  std::uint64_t next_index(std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * m) >> 64);
  }

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hpin
