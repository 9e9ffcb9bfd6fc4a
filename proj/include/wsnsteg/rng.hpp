#ifndef WSNSTEG_RNG_HPP
#define WSNSTEG_RNG_HPP

#include <cstdint>
#include <vector>

namespace wsn::rng {

// All randomness in this project flows through the SplitMix64 generator below.
// The algorithm is fixed here, not delegated to the standard library, so that
// every derived artifact (snapshots, permutations, code matrices) is
// bit-identical across platforms and compiler versions.
//
// State update:   s += 0x9E3779B97F4A7C15
// Output:         mix64(s), the murmur-style finalizer with constants
//                 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Deterministic seed derivation. Combines a parent seed with a stream tag
// (sensor index, block index, subcommand label...) hash_combine style and
// finalizes with mix64. Not cryptographic; collisions are astronomically
// unlikely at the stream counts used here.
constexpr std::uint64_t seed_combine(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a ^ (b + kGolden + (a << 6) + (a >> 2)));
}

// Tags keep unrelated streams derived from one user seed disjoint.
constexpr std::uint64_t tag(const char* s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  while (*s) {
    h ^= static_cast<unsigned char>(*s++);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // 53-bit uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; never returns 0.
  double uniform_open() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound). Lemire multiply-shift; the tiny modulo
  // bias of the plain 128-bit product is irrelevant here, determinism is not.
  std::uint64_t below(std::uint64_t bound) noexcept {
    using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
  }

  // Standard normal via the sum of 12 uniforms (Irwin-Hall, mean 6, unit
  // variance). Uses only IEEE adds, so values are reproducible to the bit on
  // any conforming platform; tails are truncated at +-6, which is harmless
  // for sensor noise. Consumes exactly 12 generator steps.
  double normal() noexcept {
    double acc = 0.0;
    for (int i = 0; i < 12; ++i) acc += uniform();
    return acc - 6.0;
  }

  // Fisher-Yates; consumes one generator step per element beyond the first.
  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace wsn::rng

#endif
