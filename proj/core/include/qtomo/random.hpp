#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qtomo {

/// xoshiro256** generator with SplitMix64 seeding.
///
/// Streams are derived deterministically from a (seed, index) pair: the
/// 256-bit state is filled by SplitMix64 starting from
/// `mix(seed) ^ mix(index + golden)`.  This makes every ensemble member a
/// pure function of the master seed and its index, so parallel loops produce
/// the same results regardless of scheduling.
///
/// Normal variates use the Marsaglia polar method on 53-bit uniforms; all
/// algorithms are fixed here so sequences do not depend on the standard
/// library implementation (binomial sampling is the one exception, see
/// simulate.hpp).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer; exposed for stream derivation in callers.
std::uint64_t splitmix64(std::uint64_t x);

/// Domain tags used to derive independent stream families from one seed.
enum class StreamDomain : std::uint64_t {
  state = 0x5354415445ULL,
  counts = 0x434f554e5453ULL,
  frame = 0x4652414d45ULL,
  loss = 0x4c4f5353ULL,
};

inline std::uint64_t domain_seed(std::uint64_t seed, StreamDomain domain) {
  return splitmix64(seed ^ static_cast<std::uint64_t>(domain));
}

}  // namespace qtomo
