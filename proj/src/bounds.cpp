#include "mlebound/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mlebound/error.hpp"
#include "mlebound/moments.hpp"

namespace mlebound {

namespace {

void require_norms(const TestFunction& h) {
  if (!(h.norm_h > 0.0) || !(h.norm_h_prime > 0.0)) {
    throw DomainError("test function '" + h.name + "' lacks positive norm certificates");
  }
}

BoundBreakdown make_breakdown(double stein, double tail, double taylor,
                              std::string id) {
  return {stein, tail, taylor, stein + tail + taylor, std::move(id)};
}

}  // namespace

void BoundInputs::validate() const {
  if (n < 1) throw DomainError("n must be >= 1");
  if (!(fisher > 0.0)) throw DomainError("Fisher information must be positive");
  if (!(q_prime_abs > 0.0)) throw DomainError("|q'(theta0)| must be positive");
  if (!(third_moment >= 0.0)) throw DomainError("third moment must be non-negative");
  if (!q_is_identity) {
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (!(mse >= 0.0)) throw DomainError("MSE must be non-negative");
    if (!(sup_q_second >= 0.0)) throw DomainError("sup |q''| must be non-negative");
  }
  require_norms(h);
}

double exp_bound_constant() { return 12.0 / std::numbers::e; }

double lemma_clt_bound(long n, double norm_h_prime, double sigma,
                       double third_abs_moment) {
  if (n < 1 || !(norm_h_prime > 0.0) || !(sigma > 0.0) || !(third_abs_moment >= 0.0)) {
    throw DomainError("lemma_clt_bound requires n >= 1, ||h'|| > 0, sigma > 0, E|Y|^3 >= 0");
  }
  return norm_h_prime / std::sqrt(static_cast<double>(n)) *
         (2.0 + third_abs_moment / (sigma * sigma * sigma));
}

BoundBreakdown theorem_bound(const BoundInputs& in) {
  in.validate();
  const double nn = static_cast<double>(in.n);
  const double info_ratio =
      std::pow(in.fisher, 1.5) / (in.q_prime_abs * in.q_prime_abs * in.q_prime_abs);
  const double stein =
      in.h.norm_h_prime / std::sqrt(nn) * (2.0 + info_ratio * in.third_moment);
  if (in.q_is_identity) return make_breakdown(stein, 0.0, 0.0, "theorem");
  const double tail = in.mse * 2.0 * in.h.norm_h / (in.epsilon * in.epsilon);
  const double taylor = in.mse * in.h.norm_h_prime * std::sqrt(nn * in.fisher) /
                        (2.0 * in.q_prime_abs) * in.sup_q_second;
  return make_breakdown(stein, tail, taylor, "theorem");
}

BoundInputs expfam_inputs(const ExpFamilyModel& m, double theta0, long n,
                          double epsilon, const TestFunction& h, double mse,
                          std::optional<double> third_moment_override) {
  if (!(epsilon > 0.0) || !m.param_space.contains_ball(theta0, epsilon)) {
    throw DomainError(m.name + ": the eps-ball around theta0 must lie inside the parameter space");
  }
  const FunctionalModel fm = as_functional(m);
  BoundInputs in;
  in.n = n;
  in.theta0 = theta0;
  in.epsilon = epsilon;
  in.fisher = fisher_info(m, theta0);
  in.q_prime_abs = std::fabs(d_prime(m, theta0));
  in.third_moment = third_moment_override ? *third_moment_override
                                          : third_abs_moment(m, theta0);
  in.mse = mse;
  in.sup_q_second = sup_abs_d_second(m, theta0, epsilon);
  in.q_is_identity = fm.q_is_identity;
  in.h = h;
  return in;
}

BoundBreakdown expfam_bound(const ExpFamilyModel& m, double theta0, long n,
                            double epsilon, const TestFunction& h, double mse,
                            std::optional<double> third_moment_override) {
  auto b = theorem_bound(
      expfam_inputs(m, theta0, n, epsilon, h, mse, third_moment_override));
  b.formula_id = "expfam";
  return b;
}

BoundBreakdown gg_bound(long n, const GeneralizedGammaParams& params,
                        const TestFunction& h) {
  params.validate();
  require_norms(h);
  if (n < 1) throw DomainError("n must be >= 1");
  const double d = params.d;
  const double p = params.p;
  const double nn = static_cast<double>(n);
  const double stein = h.norm_h_prime / std::sqrt(nn) *
                       (2.0 + std::pow(3.0 + 6.0 * p / d, 0.75));
  if (d == 1.0 && p == 1.0) return make_breakdown(stein, 0.0, 0.0, "gg");
  const double m_factor = mse_gg_factor(n, d, p);
  const double edge = p < 2.0 ? std::pow(2.0, 2.0 - p) : std::pow(1.5, p - 2.0);
  const double tail = m_factor * 8.0 * h.norm_h;
  const double taylor = m_factor * h.norm_h_prime * std::sqrt(nn * d * p) *
                        std::fabs(p - 1.0) / 2.0 * edge;
  return make_breakdown(stein, tail, taylor, "gg");
}

BoundBreakdown exp_canonical_bound(long n, const TestFunction& h) {
  if (n < 3) throw DomainError("n must be >= 3 for the canonical exponential bound");
  require_norms(h);
  const double nn = static_cast<double>(n);
  const double rate = (nn + 2.0) / ((nn - 1.0) * (nn - 2.0));
  const double stein = exp_bound_constant() * h.norm_h_prime / std::sqrt(nn);
  const double tail = 8.0 * h.norm_h * rate;
  const double taylor = 8.0 * h.norm_h_prime * std::sqrt(nn) * rate;
  return make_breakdown(stein, tail, taylor, "exp-canonical");
}

BoundBreakdown exp_noncanonical_bound(long n, const TestFunction& h) {
  if (n < 1) throw DomainError("n must be >= 1");
  require_norms(h);
  const double stein =
      exp_bound_constant() * h.norm_h_prime / std::sqrt(static_cast<double>(n));
  return make_breakdown(stein, 0.0, 0.0, "exp-noncanonical");
}

BoundBreakdown ar_bound_exp_noncanonical_breakdown(long n, const TestFunction& h) {
  if (n < 1) throw DomainError("n must be >= 1");
  require_norms(h);
  const double nn = static_cast<double>(n);
  const double root_n = std::sqrt(nn);
  const double lead = exp_bound_constant() * h.norm_h_prime / root_n;
  const double markov = 8.0 * h.norm_h / nn;
  const double remainder = 2.0 * h.norm_h_prime / root_n +
                           80.0 * h.norm_h_prime / root_n * std::sqrt(6.0 / nn + 3.0);
  return make_breakdown(lead, markov, remainder, "ar-exp-noncanonical");
}

double ar_bound_exp_noncanonical(long n, const TestFunction& h) {
  return ar_bound_exp_noncanonical_breakdown(n, h).total;
}

BoundBreakdown ar_bound_canonical_expfam(const ExpFamilyModel& m, double theta0,
                                         long n, double epsilon,
                                         const TestFunction& h, double mse) {
  if (!is_canonical(m)) {
    throw DomainError(m.name + " is not in canonical form (k(theta) != theta)");
  }
  auto b = expfam_bound(m, theta0, n, epsilon, h, mse);
  b.formula_id = "ar-canonical";
  return b;
}

}  // namespace mlebound
