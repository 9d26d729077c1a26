#include "mlebound/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mlebound/error.hpp"
#include "mlebound/parallel.hpp"
#include "mlebound/random.hpp"

namespace mlebound {

namespace {

constexpr long kChunkSize = 4096;

double finite_or(const RealFn& hint, double theta, double fallback) {
  if (!hint) return fallback;
  const double v = hint(theta);
  return std::isfinite(v) ? v : fallback;
}

double integrate_over(const RealFn& fn, const Interval& support, double center,
                      double scale, std::vector<double> kinks,
                      const specfun::QuadratureSpec& spec) {
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  // Open support ends are evaluated one ulp inside so that densities with a
  // finite limit at the boundary are not read as zero there.
  const RealFn inner = [&](double x) {
    if (std::isfinite(support.lo) && x <= support.lo) {
      x = std::nextafter(support.lo, support.hi);
    }
    if (std::isfinite(support.hi) && x >= support.hi) {
      x = std::nextafter(support.hi, support.lo);
    }
    return fn(x);
  };

  kinks.push_back(center);
  std::vector<double> pts;
  for (double k : kinks) {
    if (std::isfinite(k) && support.contains(k)) pts.push_back(k);
  }
  if (std::isfinite(support.lo)) pts.push_back(support.lo);
  if (std::isfinite(support.hi)) pts.push_back(support.hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) pts.push_back(0.0);

  double total = 0.0;
  if (!std::isfinite(support.lo)) {
    total += specfun::integrate_lower_half_line(inner, pts.front(), scale, spec).value;
  }
  // Panels touching a finite support end use x = end + width * s^4, which
  // flattens integrable power singularities such as x^(d-1) with d < 1.
  std::size_t first = 0, last = pts.size() - 1;
  if (std::isfinite(support.lo) && pts.size() >= 2) {
    const double lo = pts[0], width = pts[1] - pts[0];
    const RealFn mapped = [&](double s) {
      const double s3 = s * s * s;
      return inner(lo + width * s3 * s) * 4.0 * width * s3;
    };
    total += specfun::integrate(mapped, 0.0, 1.0, spec).value;
    first = 1;
  }
  if (std::isfinite(support.hi) && pts.size() >= 2 && last > first) {
    const double hi = pts[last], width = pts[last] - pts[last - 1];
    const RealFn mapped = [&](double s) {
      const double s3 = s * s * s;
      return inner(hi - width * s3 * s) * 4.0 * width * s3;
    };
    total += specfun::integrate(mapped, 0.0, 1.0, spec).value;
    --last;
  }
  if (last > first) {
    total += specfun::integrate(inner, std::span<const double>(pts).subspan(first, last - first + 1),
                                spec)
                 .value;
  }
  if (!std::isfinite(support.hi)) {
    total += specfun::integrate_upper_half_line(inner, pts.back(), scale, spec).value;
  }
  return total;
}

void require_trials(long trials) {
  if (trials < 1000) {
    throw DomainError("Monte Carlo MSE requires at least 1000 trials");
  }
}

}  // namespace

double exp_third_abs_moment_constant() { return 12.0 / std::numbers::e - 2.0; }

double model_expectation(const ExpFamilyModel& m, double theta, const RealFn& fn,
                         const std::vector<double>& kinks,
                         const specfun::QuadratureSpec& spec) {
  const double center = finite_or(m.center_hint, theta, 0.0);
  const double scale = finite_or(m.scale_hint, theta, 1.0);
  const RealFn weighted = [&](double x) { return fn(x) * m.density(x, theta); };
  return integrate_over(weighted, m.support, center, scale, kinks, spec);
}

double third_abs_moment_quadrature(const ExpFamilyModel& m, double theta0) {
  const double target = d_value(m, theta0);
  const RealFn cube = [&](double x) {
    const double dev = std::fabs(m.T(x) - target);
    return dev * dev * dev;
  };
  return model_expectation(m, theta0, cube);
}

double third_abs_moment(const ExpFamilyModel& m, double theta0) {
  if (!m.param_space.contains(theta0)) {
    throw DomainError("theta0 outside the parameter space of " + m.name);
  }
  if (m.closed_third_moment) return m.closed_third_moment(theta0);
  return third_abs_moment_quadrature(m, theta0);
}

double third_abs_moment(const FunctionalModel& fm, const RealFn& density,
                        const Interval& support, double theta0, double center,
                        double scale) {
  const double target = fm.q(theta0);
  const RealFn integrand = [&](double x) {
    const double dev = std::fabs(fm.g(x) - target);
    return dev * dev * dev * density(x);
  };
  return integrate_over(integrand, support, center, scale, {}, {});
}

double third_abs_moment_holder_gg(const GeneralizedGammaParams& params) {
  params.validate();
  const double ratio = params.d / params.p;
  return std::pow(params.theta, 3.0 * params.p) * std::pow(ratio, 0.75) *
         std::pow(6.0 + 3.0 * ratio, 0.75);
}

double mse_exp_canonical(long n, double theta0) {
  if (n < 3) {
    throw DomainError("mse_exp_canonical requires n >= 3 (the second moment of 1/mean is infinite otherwise)");
  }
  if (!(theta0 > 0.0)) throw DomainError("theta0 must be positive");
  const double nn = static_cast<double>(n);
  return (nn + 2.0) * theta0 * theta0 / ((nn - 1.0) * (nn - 2.0));
}

double mse_gg_factor(long n, double d, double p) {
  if (n < 1) throw DomainError("mse_gg requires n >= 1");
  GeneralizedGammaParams{1.0, d, p}.validate();
  const double z = static_cast<double>(n) * d / p;
  // (p/(nd))^{k/p} Gamma(z + k/p) / Gamma(z) = exp(L_k) with L_k the scaled
  // log-ratio, so M = 1 - 2 e^{L1} + e^{L2} is rearranged to avoid the
  // cancellation between three O(1) terms.
  const double l1 = specfun::log_gamma_ratio_scaled(z, 1.0 / p, 0.0);
  const double l2 = specfun::log_gamma_ratio_scaled(z, 2.0 / p, 0.0);
  const double e1 = std::expm1(l1);
  return e1 * e1 + std::exp(2.0 * l1) * std::expm1(l2 - 2.0 * l1);
}

double mse_gg(long n, const GeneralizedGammaParams& params) {
  params.validate();
  return params.theta * params.theta * mse_gg_factor(n, params.d, params.p);
}

std::optional<double> mse_exact(const ExpFamilyModel& m, double theta0, long n) {
  if (n < 1 || !m.param_space.contains(theta0)) return std::nullopt;
  const double nn = static_cast<double>(n);
  switch (m.family) {
    case ModelFamily::ExpCanonical:
      if (n < 3) return std::nullopt;
      return mse_exp_canonical(n, theta0);
    case ModelFamily::ExpNonCanonical:
    case ModelFamily::LaplaceScale:
      return theta0 * theta0 / nn;
    case ModelFamily::NormalMean:
      return m.sigma * m.sigma / nn;
    case ModelFamily::NormalVariance:
      return 2.0 * theta0 * theta0 / nn;
    case ModelFamily::WeibullScale:
    case ModelFamily::GeneralizedGamma:
      return mse_gg(n, {theta0, m.shape_d, m.shape_p});
    case ModelFamily::Custom:
      break;
  }
  return std::nullopt;
}

MonteCarloEstimate mse_monte_carlo(const ExpFamilyModel& m, double theta0,
                                   long n, long trials, std::uint64_t seed,
                                   unsigned threads) {
  require_trials(trials);
  if (n < 1) throw DomainError("n must be >= 1");
  struct Sums {
    CompensatedSum sq, sq2;
  };
  auto chunk = [&](long index, long first, long count) {
    CounterRng rng = CounterRng::stream(seed, static_cast<std::uint64_t>(index));
    Sums s;
    for (long t = 0; t < count; ++t) {
      double sum_t = 0.0;
      for (long i = 0; i < n; ++i) sum_t += m.T(sample_model(m, theta0, rng));
      double est;
      try {
        est = mle_from_mean_t(m, sum_t / static_cast<double>(n));
      } catch (const std::exception& e) {
        throw std::runtime_error("MLE failed at trial " + std::to_string(first + t) +
                                 ": " + e.what());
      }
      const double err2 = (est - theta0) * (est - theta0);
      s.sq.add(err2);
      s.sq2.add(err2 * err2);
    }
    return s;
  };
  const auto parts = run_chunks<Sums>(trials, kChunkSize, threads, chunk);
  CompensatedSum sq, sq2;
  for (const auto& p : parts) {
    sq.add(p.sq.value());
    sq2.add(p.sq2.value());
  }
  const double nt = static_cast<double>(trials);
  const double mean = sq.value() / nt;
  const double var = std::max(0.0, (sq2.value() - nt * mean * mean) / (nt - 1.0));
  return {mean, std::sqrt(var / nt), trials};
}

double expected_h_of_z(const TestFunction& h) {
  if (!h.h) throw DomainError("test function '" + h.name + "' has no evaluable h");
  const RealFn integrand = [&](double z) { return h.h(z) * specfun::std_normal_pdf(z); };
  return specfun::integrate_real_line(integrand);
}

}  // namespace mlebound
