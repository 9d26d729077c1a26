#pragma once

#include <optional>
#include <string>

#include "mlebound/models.hpp"
#include "mlebound/test_function.hpp"

namespace mlebound {

/// Everything the general three-term bound consumes.
struct BoundInputs {
  long n = 1;
  double theta0 = 0.0;
  double epsilon = 0.0;
  double fisher = 0.0;          // i(theta0)
  double q_prime_abs = 0.0;     // |q'(theta0)|
  double third_moment = 0.0;    // E|g(X1) - q(theta0)|^3
  double mse = 0.0;             // E[(theta_hat - theta0)^2]
  double sup_q_second = 0.0;    // sup_{|theta - theta0| <= eps} |q''(theta)|
  bool q_is_identity = false;
  TestFunction h;

  void validate() const;
};

/// Per-term decomposition of a bound. total = stein + tail + taylor.
struct BoundBreakdown {
  double stein_term = 0.0;   // normal approximation of the standardized sum
  double tail_term = 0.0;    // Markov bound on |theta_hat - theta0| > eps
  double taylor_term = 0.0;  // second-order remainder of q on the eps-ball
  double total = 0.0;
  std::string formula_id;
};

/// 2 + 12/e - 2 = 12/e, printed as 4.41456 in the exponential bounds.
double exp_bound_constant();

/// (||h'|| / sqrt n)(2 + E|Y1|^3 / sigma^3) for standardized i.i.d. sums.
double lemma_clt_bound(long n, double norm_h_prime, double sigma,
                       double third_abs_moment);

/// The general bound: Stein term plus, unless q is the identity, the Markov
/// tail term and the Taylor remainder term.
BoundBreakdown theorem_bound(const BoundInputs& in);

/// Inputs assembled from an exponential-family model (q = D, g = T).
/// `third_moment_override` replaces E|T - D|^3, e.g. by the Hoelder bound.
BoundInputs expfam_inputs(const ExpFamilyModel& m, double theta0, long n,
                          double epsilon, const TestFunction& h, double mse,
                          std::optional<double> third_moment_override = {});

BoundBreakdown expfam_bound(const ExpFamilyModel& m, double theta0, long n,
                            double epsilon, const TestFunction& h, double mse,
                            std::optional<double> third_moment_override = {});

/// Generalized gamma closed form with eps = theta0 / 2 and the Hoelder
/// third moment; independent of theta0.
BoundBreakdown gg_bound(long n, const GeneralizedGammaParams& params,
                        const TestFunction& h);

/// Canonical exponential Exp(theta), eps = theta0 / 2. Requires n >= 3.
BoundBreakdown exp_canonical_bound(long n, const TestFunction& h);

/// Non-canonical exponential Exp(1/theta): the Stein term alone.
BoundBreakdown exp_noncanonical_bound(long n, const TestFunction& h);

/// Closed-form earlier (general-purpose) bound for Exp(1/theta).
double ar_bound_exp_noncanonical(long n, const TestFunction& h);

/// Same value split into (leading, Markov, remainder) pieces for reporting.
BoundBreakdown ar_bound_exp_noncanonical_breakdown(long n, const TestFunction& h);

/// In the canonical case the earlier bound coincides with expfam_bound.
/// Throws DomainError for non-canonical models.
BoundBreakdown ar_bound_canonical_expfam(const ExpFamilyModel& m, double theta0,
                                         long n, double epsilon,
                                         const TestFunction& h, double mse);

}  // namespace mlebound
