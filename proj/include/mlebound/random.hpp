#pragma once

#include <cstdint>
#include <limits>

#include "mlebound/models.hpp"

namespace mlebound {

/// Counter-based 64-bit generator: output i is a SplitMix64 finalizer applied
/// to key + i * golden. Streams are split by deriving a fresh key, so chunk
/// streams never depend on how many values another chunk consumed.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream for (seed, index).
  static CounterRng stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard normal via the Marsaglia polar method (second value discarded).
double sample_std_normal(CounterRng& rng);

/// Exponential with unit rate by inversion.
double sample_std_exponential(CounterRng& rng);

/// Gamma(shape, rate). Marsaglia-Tsang squeeze/acceptance for shape >= 1,
/// boosted through Gamma(shape + 1) * U^(1/shape) for shape < 1.
/// Throws GeneratorError after 1e6 rejections.
double sample_gamma(double shape, double rate, CounterRng& rng);

/// One draw from f(. | theta0) for a built-in model.
double sample_model(const ExpFamilyModel& m, double theta0, CounterRng& rng);

}  // namespace mlebound
