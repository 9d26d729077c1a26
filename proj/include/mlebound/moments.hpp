#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mlebound/models.hpp"
#include "mlebound/specfun.hpp"
#include "mlebound/test_function.hpp"

namespace mlebound {

/// E|X - mu|^3 / mu^3 for an exponential with mean mu; exactly 12/e - 2.
double exp_third_abs_moment_constant();

/// Integral of fn(x) f(x | theta) over the model support. Breakpoints are
/// placed at the model's center hint and at any extra `kinks` inside the
/// support; infinite ends are mapped onto finite panels.
double model_expectation(const ExpFamilyModel& m, double theta,
                         const RealFn& fn, const std::vector<double>& kinks = {},
                         const specfun::QuadratureSpec& spec = {});

/// E|T(X) - D(theta0)|^3: the registered closed form, else quadrature.
double third_abs_moment(const ExpFamilyModel& m, double theta0);

/// Quadrature path only (used to shadow the closed forms).
double third_abs_moment_quadrature(const ExpFamilyModel& m, double theta0);

/// E|g(X) - q(theta0)|^3 for a general (q, g) pair against an explicit
/// density on `support`.
double third_abs_moment(const FunctionalModel& fm, const RealFn& density,
                        const Interval& support, double theta0, double center,
                        double scale);

/// Upper bound theta^{3p} (d/p)^{3/4} (6 + 3d/p)^{3/4} on E|X^p - (d/p)theta^p|^3
/// from E|Y|^3 <= (E Y^4)^{3/4}. Not the exact moment.
double third_abs_moment_holder_gg(const GeneralizedGammaParams& params);

/// E[(theta_hat - theta0)^2] = (n + 2) theta0^2 / ((n - 1)(n - 2)), n >= 3.
double mse_exp_canonical(long n, double theta0);

/// theta-free factor M(n, d, p) with mse_gg = theta^2 M.
double mse_gg_factor(long n, double d, double p);
double mse_gg(long n, const GeneralizedGammaParams& params);

/// Closed-form MSE of the MLE when one is known for the family.
std::optional<double> mse_exact(const ExpFamilyModel& m, double theta0, long n);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  long trials = 0;
};

/// Seeded Monte Carlo estimate of E[(theta_hat - theta0)^2]. Requires
/// trials >= 1000. Chunked streams make the result independent of `threads`.
MonteCarloEstimate mse_monte_carlo(const ExpFamilyModel& m, double theta0,
                                   long n, long trials, std::uint64_t seed,
                                   unsigned threads = 0);

/// Integral of h against the standard normal density.
double expected_h_of_z(const TestFunction& h);

}  // namespace mlebound
