#pragma once

#include <cstdint>
#include <limits>

namespace dwre {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based derivation: a well-mixed word for (seed, a, b).
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

/// Uniform double in [0,1) from the top 53 bits.
constexpr double to_unit(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

constexpr double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return to_unit(derive(seed, a, b));
}

/// Seed for replicate `index` of an experiment with `base_seed`.
constexpr std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t index) {
  return derive(base_seed, index, 0x5eedULL);
}

/// A UniformRandomBitGenerator over the counter stream of one seed.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit CounterEngine(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return derive(seed_, stream_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace dwre
