#pragma once

#include <functional>
#include <span>

namespace mlebound::specfun {

using RealFn = std::function<double(double)>;

// Tolerances for the adaptive Simpson integrator.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_refinements = 60;
  // Half-width of the window used by integrate_real_line.
  double truncation_radius = 12.0;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated |S2 - S1| / 15 over accepted panels
  long evaluations = 0;
};

/// ln Gamma(x) for x > 0. Lanczos approximation (g = 607/128).
double log_gamma(double x);

/// Gamma(z + a) / Gamma(z + b), evaluated in log space.
double gamma_ratio(double z, double a, double b);

/// ln[Gamma(z + a) / Gamma(z + b)] - (a - b) ln z.
///
/// This is the quantity that stays O(1/z) for large z; it is computed
/// without forming the two large log-gamma values so that callers that
/// subtract nearby ratios (the generalized gamma MSE) keep full relative
/// accuracy at z ~ 1e5.
double log_gamma_ratio_scaled(double z, double a, double b);

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Adaptive Simpson over [a, b]. Throws ConvergenceError when a panel is
/// still above tolerance after spec.max_refinements bisections.
QuadratureResult integrate(const RealFn& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Integrates across consecutive breakpoints (must be increasing, finite).
QuadratureResult integrate(const RealFn& f, std::span<const double> breakpoints,
                           const QuadratureSpec& spec = {});

/// Integral of f over [a, +inf) via x = a + scale * t / (1 - t).
QuadratureResult integrate_upper_half_line(const RealFn& f, double a,
                                           double scale,
                                           const QuadratureSpec& spec = {});

/// Integral of f over (-inf, b] via x = b - scale * t / (1 - t).
QuadratureResult integrate_lower_half_line(const RealFn& f, double b,
                                           double scale,
                                           const QuadratureSpec& spec = {});

/// Integral over [-R, R] with R = spec.truncation_radius, meant for
/// integrands carrying a standard normal weight.
double integrate_real_line(const RealFn& f, const QuadratureSpec& spec = {});

}  // namespace mlebound::specfun
