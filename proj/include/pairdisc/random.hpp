#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace pairdisc {

/// Seed of a deterministic random stream.
struct RngSeed {
  std::uint64_t value = 0;

  friend bool operator==(RngSeed, RngSeed) = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Child seed for substream `index` of `parent`. Substreams of one parent are
/// independent of each other and of the order in which they are consumed.
inline RngSeed derive_seed(RngSeed parent, std::uint64_t index) {
  return RngSeed{detail::splitmix64(detail::splitmix64(parent.value) ^
                                    detail::splitmix64(index + 0x632be59bd9b4e019ULL))};
}

inline RngSeed derive_seed(RngSeed parent, std::initializer_list<std::uint64_t> path) {
  for (auto index : path) parent = derive_seed(parent, index);
  return parent;
}

/// 64-bit Mersenne Twister seeded from a RngSeed.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(RngSeed seed) : engine_(detail::splitmix64(seed.value)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> values) {
    std::shuffle(values.begin(), values.end(), engine_);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pairdisc
