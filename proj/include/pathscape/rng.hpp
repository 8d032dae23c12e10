#pragma once

// Counter-based seeding and a small sequential generator.
//
// Every stochastic quantity in the library is drawn from a SplitMix64
// stream.  Replica i of an experiment with master seed s uses the stream
// seeded with derive_seed(s, i), so replicas can run in any order or on any
// thread and still reproduce bit for bit.

#include <cstdint>
#include <limits>
#include <string_view>

namespace pathscape {

inline constexpr std::string_view kRngStreamTag = "splitmix64/derive-v1";

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.  A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) + kGoldenGamma * (index + 1));
}

/// Top 53 bits as a double in [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  constexpr double uniform() noexcept { return to_unit_interval((*this)()); }

 private:
  std::uint64_t state_;
};

}  // namespace pathscape
