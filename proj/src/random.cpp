#include "mlebound/random.hpp"

#include <cmath>
#include <string>

#include "mlebound/error.hpp"

namespace mlebound {

CounterRng CounterRng::stream(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = mix(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t b = mix(index + 0xbb67ae8584caa73bULL);
  return CounterRng(mix(a ^ (b + 0x3c6ef372fe94f82bULL + (a << 6) + (a >> 2))));
}

double sample_std_normal(CounterRng& rng) {
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

double sample_std_exponential(CounterRng& rng) { return -std::log(rng.uniform()); }

double sample_gamma(double shape, double rate, CounterRng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) ||
      !std::isfinite(rate)) {
    throw DomainError("sample_gamma requires positive finite shape and rate");
  }
  if (shape < 1.0) {
    const double boosted = sample_gamma(shape + 1.0, 1.0, rng);
    return boosted * std::pow(rng.uniform(), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  constexpr long kMaxTries = 1000000;
  for (long i = 0; i < kMaxTries; ++i) {
    double z;
    double v;
    do {
      z = sample_std_normal(rng);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v / rate;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
  throw GeneratorError("gamma sampler exceeded " + std::to_string(kMaxTries) +
                       " rejections");
}

double sample_model(const ExpFamilyModel& m, double theta0, CounterRng& rng) {
  if (!m.param_space.contains(theta0)) {
    throw DomainError("theta0 outside the parameter space of " + m.name);
  }
  switch (m.family) {
    case ModelFamily::NormalMean:
      return theta0 + m.sigma * sample_std_normal(rng);
    case ModelFamily::NormalVariance:
      return m.mu + std::sqrt(theta0) * sample_std_normal(rng);
    case ModelFamily::WeibullScale:
      return theta0 * std::pow(sample_std_exponential(rng), 1.0 / m.shape_p);
    case ModelFamily::LaplaceScale: {
      const double mag = theta0 * sample_std_exponential(rng);
      return (rng() >> 63) != 0 ? mag : -mag;
    }
    case ModelFamily::ExpCanonical:
      return sample_std_exponential(rng) / theta0;
    case ModelFamily::ExpNonCanonical:
      return theta0 * sample_std_exponential(rng);
    case ModelFamily::GeneralizedGamma: {
      const double p = m.shape_p;
      const double g = sample_gamma(m.shape_d / p, std::pow(theta0, -p), rng);
      return std::pow(g, 1.0 / p);
    }
    case ModelFamily::Custom:
      break;
  }
  throw DomainError("no sampler available for model " + m.name);
}

}  // namespace mlebound
