#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mlebound {

using RealFn = std::function<double(double)>;

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return lo < x && x < hi; }
  // Closed ball [center - radius, center + radius] lies inside (lo, hi).
  bool contains_ball(double center, double radius) const {
    return lo < center - radius && center + radius < hi;
  }
};

/// Built-in families; Custom models carry no sampler.
enum class ModelFamily {
  NormalMean,
  NormalVariance,
  WeibullScale,
  LaplaceScale,
  ExpCanonical,
  ExpNonCanonical,
  GeneralizedGamma,
  Custom,
};

/// Shape parameters of GG(theta, d, p); theta is the unknown scale.
struct GeneralizedGammaParams {
  double theta = 1.0;
  double d = 1.0;
  double p = 1.0;

  void validate() const;
};

/// One-parameter exponential family
///   f(x | theta) = exp{ k(theta) T(x) - A(theta) + S(x) } on `support`.
///
/// Third derivatives of k and A are carried in addition to the first two so
/// that D'' (the curvature entering the Taylor term of the bound) is exact.
/// The optional closed_* hooks let built-ins bypass the generic numerical
/// paths; each one is shadowed by a numerical check in the tests.
struct ExpFamilyModel {
  std::string name;
  ModelFamily family = ModelFamily::Custom;

  RealFn k, dk, d2k, d3k;
  RealFn A, dA, d2A, d3A;
  RealFn T;
  RealFn S;

  Interval support;
  Interval param_space;

  // +1 if D is increasing on param_space, -1 if decreasing.
  int d_direction = 1;
  // Whether |D''| is monotone on every ball, making the grid supremum exact.
  bool monotone_abs_d2 = false;

  // Typical location and spread of X at theta; used to place breakpoints and
  // scale half-line maps when integrating against the density.
  RealFn center_hint;
  RealFn scale_hint;

  std::function<double(double mean_t)> closed_mle;
  std::function<double(double theta0, double eps)> closed_sup_d2;
  std::function<double(double theta0)> closed_third_moment;

  // Family parameters echoed for sampling and reporting.
  double sigma = 1.0;  // normal-mean known sd
  double mu = 0.0;     // normal-variance known mean
  double shape_d = 1.0;
  double shape_p = 1.0;

  double density(double x, double theta) const;
};

/// Reparametrization q(theta_hat) = mean g(X_i).
struct FunctionalModel {
  std::string name;
  RealFn q, dq, d2q;
  RealFn g;
  bool q_is_identity = false;
  std::function<double(double theta0, double eps)> sup_abs_q_second;
};

// Built-in constructors.
ExpFamilyModel normal_mean_model(double sigma);
ExpFamilyModel normal_variance_model(double mu);
ExpFamilyModel weibull_scale_model(double alpha);
ExpFamilyModel laplace_scale_model();
ExpFamilyModel exp_canonical_model();
ExpFamilyModel exp_noncanonical_model();
ExpFamilyModel generalized_gamma_model(double d, double p);

/// Model selection by string identifier, used by the CLI.
struct ModelSpec {
  std::string id = "exp-noncanonical";
  double d = 1.0;
  double p = 1.0;
  double alpha = 1.0;
  double sigma = 1.0;
  double mu = 0.0;
};

/// Accepted ids: normal-mean, normal-variance, weibull, laplace,
/// exp-canonical, exp-noncanonical, gg. Throws DomainError otherwise.
ExpFamilyModel make_model(const ModelSpec& spec);

/// D(theta) = A'(theta) / k'(theta).
double d_value(const ExpFamilyModel& m, double theta);
double d_prime(const ExpFamilyModel& m, double theta);
double d_second(const ExpFamilyModel& m, double theta);

/// Expected Fisher information for one observation. Evaluates both
/// (A''k' - k''A')/k' and A'' - k''D and throws ConsistencyError if they
/// disagree beyond 1e-9 relative, DomainError if not positive.
double fisher_info(const ExpFamilyModel& m, double theta);

/// sqrt(i(theta0)) / |q'(theta0)| = |k'| / sqrt|A'' - k''D|.
double stein_ratio(const ExpFamilyModel& m, double theta0);

/// MLE from the sample mean of T(x_i): closed form when registered,
/// bracketing bisection with Newton steps otherwise.
double mle_from_mean_t(const ExpFamilyModel& m, double mean_t);
double mle_from_mean_t_generic(const ExpFamilyModel& m, double mean_t);
double mle(const ExpFamilyModel& m, std::span<const double> sample);

/// sup over |theta - theta0| <= eps of |D''(theta)|. Closed form when
/// registered; otherwise the maximum over a 10,001 point grid, which is a
/// lower estimate unless the model declares monotone |D''|.
double sup_abs_d_second(const ExpFamilyModel& m, double theta0, double eps);
double sup_abs_d_second_grid(const ExpFamilyModel& m, double theta0, double eps);

/// True if k(theta) = theta and k' = 1 on a parameter grid.
bool is_canonical(const ExpFamilyModel& m);

/// (q, g) = (D, T), with q_is_identity detected on a dense grid.
FunctionalModel as_functional(const ExpFamilyModel& m);

/// Parameter grid used by identity/canonicality checks: 1001 points over the
/// parameter space (log-spaced on (0, inf), clipped to [-1e3, 1e3] on R).
std::vector<double> parameter_grid(const Interval& space, int points = 1001);

}  // namespace mlebound
