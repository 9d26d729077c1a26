#include "mlebound/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mlebound/error.hpp"
#include "mlebound/specfun.hpp"

namespace mlebound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Interval kRealLine{-kInf, kInf};
const Interval kPositive{0.0, kInf};

// E|X - mu|^3 for an exponential with mean mu is (12/e - 2) mu^3.
double exp_third_abs_constant() { return 12.0 / std::numbers::e - 2.0; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be a finite positive number");
  }
}

void require_param(const ExpFamilyModel& m, double theta) {
  if (!m.param_space.contains(theta)) {
    throw DomainError("theta = " + std::to_string(theta) +
                      " lies outside the parameter space of " + m.name);
  }
}

double gg_sup_d2(double d, double p, double theta0, double eps) {
  if (p == 1.0) return 0.0;
  const double edge = p < 2.0 ? theta0 - eps : theta0 + eps;
  return d * std::fabs(p - 1.0) * std::pow(edge, p - 2.0);
}

// Shared scale-family pieces k = -theta^-p, A = d ln theta (GG and Weibull).
void fill_power_scale(ExpFamilyModel& m, double d, double p) {
  m.k = [p](double t) { return -std::pow(t, -p); };
  m.dk = [p](double t) { return p * std::pow(t, -p - 1.0); };
  m.d2k = [p](double t) { return -p * (p + 1.0) * std::pow(t, -p - 2.0); };
  m.d3k = [p](double t) {
    return p * (p + 1.0) * (p + 2.0) * std::pow(t, -p - 3.0);
  };
  m.A = [d](double t) { return d * std::log(t); };
  m.dA = [d](double t) { return d / t; };
  m.d2A = [d](double t) { return -d / (t * t); };
  m.d3A = [d](double t) { return 2.0 * d / (t * t * t); };
  m.T = [p](double x) { return std::pow(x, p); };
  m.support = kPositive;
  m.param_space = kPositive;
  m.d_direction = 1;
  m.monotone_abs_d2 = true;
  m.center_hint = [](double t) { return t; };
  m.scale_hint = [](double t) { return t; };
  m.closed_mle = [d, p](double mean_t) { return std::pow(p / d * mean_t, 1.0 / p); };
  m.closed_sup_d2 = [d, p](double theta0, double eps) {
    return gg_sup_d2(d, p, theta0, eps);
  };
  m.shape_d = d;
  m.shape_p = p;
}

// k = -1/theta scale family with D(theta) = theta (exponential mean, Laplace).
void fill_inverse_scale(ExpFamilyModel& m) {
  m.k = [](double t) { return -1.0 / t; };
  m.dk = [](double t) { return 1.0 / (t * t); };
  m.d2k = [](double t) { return -2.0 / (t * t * t); };
  m.d3k = [](double t) { return 6.0 / (t * t * t * t); };
  m.dA = [](double t) { return 1.0 / t; };
  m.d2A = [](double t) { return -1.0 / (t * t); };
  m.d3A = [](double t) { return 2.0 / (t * t * t); };
  m.param_space = kPositive;
  m.d_direction = 1;
  m.monotone_abs_d2 = true;
  m.scale_hint = [](double t) { return t; };
  m.closed_mle = [](double mean_t) { return mean_t; };
  m.closed_sup_d2 = [](double, double) { return 0.0; };
  m.closed_third_moment = [](double theta0) {
    return exp_third_abs_constant() * theta0 * theta0 * theta0;
  };
}

}  // namespace

void GeneralizedGammaParams::validate() const {
  require_positive(theta, "theta");
  require_positive(d, "d");
  require_positive(p, "p");
}

double ExpFamilyModel::density(double x, double theta) const {
  if (!support.contains(x)) return 0.0;
  return std::exp(k(theta) * T(x) - A(theta) + S(x));
}

ExpFamilyModel normal_mean_model(double sigma) {
  require_positive(sigma, "sigma");
  const double s2 = sigma * sigma;
  ExpFamilyModel m;
  m.name = "normal-mean";
  m.family = ModelFamily::NormalMean;
  m.sigma = sigma;
  m.k = [s2](double t) { return t / s2; };
  m.dk = [s2](double) { return 1.0 / s2; };
  m.d2k = [](double) { return 0.0; };
  m.d3k = [](double) { return 0.0; };
  m.A = [s2](double t) { return t * t / (2.0 * s2); };
  m.dA = [s2](double t) { return t / s2; };
  m.d2A = [s2](double) { return 1.0 / s2; };
  m.d3A = [](double) { return 0.0; };
  m.T = [](double x) { return x; };
  m.S = [s2, sigma](double x) {
    return -x * x / (2.0 * s2) - std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  m.support = kRealLine;
  m.param_space = kRealLine;
  m.monotone_abs_d2 = true;
  m.center_hint = [](double t) { return t; };
  m.scale_hint = [sigma](double) { return sigma; };
  m.closed_mle = [](double mean_t) { return mean_t; };
  m.closed_sup_d2 = [](double, double) { return 0.0; };
  m.closed_third_moment = [sigma](double) {
    return 2.0 * std::sqrt(2.0 / std::numbers::pi) * sigma * sigma * sigma;
  };
  return m;
}

ExpFamilyModel normal_variance_model(double mu) {
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
  ExpFamilyModel m;
  m.name = "normal-variance";
  m.family = ModelFamily::NormalVariance;
  m.mu = mu;
  m.k = [](double t) { return -1.0 / (2.0 * t); };
  m.dk = [](double t) { return 1.0 / (2.0 * t * t); };
  m.d2k = [](double t) { return -1.0 / (t * t * t); };
  m.d3k = [](double t) { return 3.0 / (t * t * t * t); };
  m.A = [](double t) { return 0.5 * std::log(t); };
  m.dA = [](double t) { return 0.5 / t; };
  m.d2A = [](double t) { return -0.5 / (t * t); };
  m.d3A = [](double t) { return 1.0 / (t * t * t); };
  m.T = [mu](double x) { return (x - mu) * (x - mu); };
  m.S = [](double) { return -0.5 * std::log(2.0 * std::numbers::pi); };
  m.support = kRealLine;
  m.param_space = kPositive;
  m.monotone_abs_d2 = true;
  m.center_hint = [mu](double) { return mu; };
  m.scale_hint = [](double t) { return std::sqrt(t); };
  m.closed_mle = [](double mean_t) { return mean_t; };
  m.closed_sup_d2 = [](double, double) { return 0.0; };
  // No closed form registered for E|(X-mu)^2 - theta|^3; quadrature is used.
  return m;
}

ExpFamilyModel weibull_scale_model(double alpha) {
  require_positive(alpha, "alpha");
  ExpFamilyModel m;
  fill_power_scale(m, alpha, alpha);
  m.name = "weibull";
  m.family = ModelFamily::WeibullScale;
  m.S = [alpha](double x) {
    return alpha == 1.0 ? 0.0 : std::log(alpha) + (alpha - 1.0) * std::log(x);
  };
  if (alpha == 1.0) {
    m.closed_third_moment = [](double theta0) {
      return exp_third_abs_constant() * theta0 * theta0 * theta0;
    };
  }
  return m;
}

ExpFamilyModel generalized_gamma_model(double d, double p) {
  require_positive(d, "d");
  require_positive(p, "p");
  ExpFamilyModel m;
  fill_power_scale(m, d, p);
  m.name = "gg";
  m.family = ModelFamily::GeneralizedGamma;
  const double log_norm = std::log(p) - specfun::log_gamma(d / p);
  m.S = [d, log_norm](double x) {
    return d == 1.0 ? log_norm : log_norm + (d - 1.0) * std::log(x);
  };
  if (d == 1.0 && p == 1.0) {
    m.closed_third_moment = [](double theta0) {
      return exp_third_abs_constant() * theta0 * theta0 * theta0;
    };
  }
  return m;
}

ExpFamilyModel laplace_scale_model() {
  ExpFamilyModel m;
  fill_inverse_scale(m);
  m.name = "laplace";
  m.family = ModelFamily::LaplaceScale;
  m.A = [](double t) { return std::log(2.0 * t); };
  m.T = [](double x) { return std::fabs(x); };
  m.S = [](double) { return 0.0; };
  m.support = kRealLine;
  m.center_hint = [](double) { return 0.0; };
  return m;
}

ExpFamilyModel exp_noncanonical_model() {
  ExpFamilyModel m;
  fill_inverse_scale(m);
  m.name = "exp-noncanonical";
  m.family = ModelFamily::ExpNonCanonical;
  m.A = [](double t) { return std::log(t); };
  m.T = [](double x) { return x; };
  m.S = [](double) { return 0.0; };
  m.support = kPositive;
  m.center_hint = [](double t) { return t; };
  return m;
}

ExpFamilyModel exp_canonical_model() {
  ExpFamilyModel m;
  m.name = "exp-canonical";
  m.family = ModelFamily::ExpCanonical;
  m.k = [](double t) { return t; };
  m.dk = [](double) { return 1.0; };
  m.d2k = [](double) { return 0.0; };
  m.d3k = [](double) { return 0.0; };
  m.A = [](double t) { return -std::log(t); };
  m.dA = [](double t) { return -1.0 / t; };
  m.d2A = [](double t) { return 1.0 / (t * t); };
  m.d3A = [](double t) { return -2.0 / (t * t * t); };
  m.T = [](double x) { return -x; };
  m.S = [](double) { return 0.0; };
  m.support = kPositive;
  m.param_space = kPositive;
  m.d_direction = 1;
  m.monotone_abs_d2 = true;
  m.center_hint = [](double t) { return 1.0 / t; };
  m.scale_hint = [](double t) { return 1.0 / t; };
  m.closed_mle = [](double mean_t) { return -1.0 / mean_t; };
  // |D''| = 2 / theta^3 peaks at the left edge of the ball.
  m.closed_sup_d2 = [](double theta0, double eps) {
    const double edge = theta0 - eps;
    return 2.0 / (edge * edge * edge);
  };
  m.closed_third_moment = [](double theta0) {
    return exp_third_abs_constant() / (theta0 * theta0 * theta0);
  };
  return m;
}

ExpFamilyModel make_model(const ModelSpec& spec) {
  const std::string& id = spec.id;
  if (id == "normal-mean") return normal_mean_model(spec.sigma);
  if (id == "normal-variance") return normal_variance_model(spec.mu);
  if (id == "weibull") return weibull_scale_model(spec.alpha);
  if (id == "laplace") return laplace_scale_model();
  if (id == "exp-canonical") return exp_canonical_model();
  if (id == "exp-noncanonical") return exp_noncanonical_model();
  if (id == "gg") return generalized_gamma_model(spec.d, spec.p);
  throw DomainError("unknown model id '" + id + "'");
}

double d_value(const ExpFamilyModel& m, double theta) {
  require_param(m, theta);
  return m.dA(theta) / m.dk(theta);
}

double d_prime(const ExpFamilyModel& m, double theta) {
  require_param(m, theta);
  const double k1 = m.dk(theta);
  return (m.d2A(theta) * k1 - m.dA(theta) * m.d2k(theta)) / (k1 * k1);
}

double d_second(const ExpFamilyModel& m, double theta) {
  require_param(m, theta);
  const double k1 = m.dk(theta);
  const double k2 = m.d2k(theta);
  const double a1 = m.dA(theta);
  const double a2 = m.d2A(theta);
  const double num1 = m.d3A(theta) * k1 - a1 * m.d3k(theta);
  const double num2 = a2 * k1 - a1 * k2;
  return num1 / (k1 * k1) - 2.0 * k2 * num2 / (k1 * k1 * k1);
}

double fisher_info(const ExpFamilyModel& m, double theta) {
  require_param(m, theta);
  const double k1 = m.dk(theta);
  if (k1 == 0.0) throw DomainError(m.name + ": k'(theta) vanishes");
  const double via_ratio = (m.d2A(theta) * k1 - m.d2k(theta) * m.dA(theta)) / k1;
  const double via_d = m.d2A(theta) - m.d2k(theta) * d_value(m, theta);
  const double scale = std::max(std::fabs(via_ratio), std::fabs(via_d));
  if (std::fabs(via_ratio - via_d) > 1e-9 * scale) {
    throw ConsistencyError(m.name + ": Fisher information forms disagree");
  }
  if (!(via_d > 0.0)) {
    throw DomainError(m.name + ": Fisher information is not positive at theta = " +
                      std::to_string(theta));
  }
  return via_d;
}

double stein_ratio(const ExpFamilyModel& m, double theta0) {
  const double info = fisher_info(m, theta0);
  return std::fabs(m.dk(theta0)) / std::sqrt(info);
}

double mle_from_mean_t(const ExpFamilyModel& m, double mean_t) {
  if (!std::isfinite(mean_t)) throw DomainError("mean of T is not finite");
  if (!m.closed_mle) return mle_from_mean_t_generic(m, mean_t);
  const double theta = m.closed_mle(mean_t);
  if (!m.param_space.contains(theta)) {
    throw DomainError(m.name + ": mean T = " + std::to_string(mean_t) +
                      " is not attained by D on the parameter space");
  }
  return theta;
}

double mle_from_mean_t_generic(const ExpFamilyModel& m, double mean_t) {
  const Interval& ps = m.param_space;
  const double dir = m.d_direction >= 0 ? 1.0 : -1.0;
  auto residual = [&](double t) { return dir * (m.dA(t) / m.dk(t) - mean_t); };

  double start = 0.0;
  if (std::isfinite(ps.lo) && std::isfinite(ps.hi)) {
    start = 0.5 * (ps.lo + ps.hi);
  } else if (std::isfinite(ps.lo)) {
    start = ps.lo + std::max(1.0, std::fabs(ps.lo));
  } else if (std::isfinite(ps.hi)) {
    start = ps.hi - std::max(1.0, std::fabs(ps.hi));
  }

  const std::string unreachable =
      m.name + ": mean T = " + std::to_string(mean_t) +
      " is not attained by D on the parameter space";

  // Bracket the root, walking toward whichever end the sign points at.
  double lo = start;
  double hi = start;
  double r0 = residual(start);
  if (r0 == 0.0) return start;
  constexpr int kMaxExpand = 2200;
  if (r0 < 0.0) {
    double step = std::max(1.0, std::fabs(start));
    int it = 0;
    for (; it < kMaxExpand; ++it) {
      const double next =
          std::isfinite(ps.hi) ? 0.5 * (hi + ps.hi) : hi + step;
      step *= 2.0;
      if (!(next > hi) || !std::isfinite(next)) break;
      lo = hi;
      hi = next;
      const double r = residual(hi);
      if (r == 0.0) return hi;
      if (r > 0.0) break;
    }
    if (it == kMaxExpand || !(residual(hi) > 0.0)) throw DomainError(unreachable);
  } else {
    double step = std::max(1.0, std::fabs(start));
    int it = 0;
    for (; it < kMaxExpand; ++it) {
      const double next =
          std::isfinite(ps.lo) ? 0.5 * (lo + ps.lo) : lo - step;
      step *= 2.0;
      if (!(next < lo) || !std::isfinite(next)) break;
      hi = lo;
      lo = next;
      const double r = residual(lo);
      if (r == 0.0) return lo;
      if (r < 0.0) break;
    }
    if (it == kMaxExpand || !(residual(lo) < 0.0)) throw DomainError(unreachable);
  }

  // Safeguarded Newton inside the bracket [lo, hi] with residual(lo) < 0 < residual(hi).
  double x = 0.5 * (lo + hi);
  const double target_scale = std::max(1.0, std::fabs(mean_t));
  for (int it = 0; it < 400; ++it) {
    const double r = residual(x);
    if (std::fabs(r) <= 1e-15 * target_scale) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = dir * d_prime(m, x);
    double next = x - r / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    const double width_tol =
        4.0 * std::numeric_limits<double>::epsilon() *
        std::max(std::fabs(lo), std::fabs(hi));
    if (hi - lo <= width_tol || next == x) return next;
    x = next;
  }
  throw ConvergenceError(m.name + ": D-inversion did not converge");
}

double mle(const ExpFamilyModel& m, std::span<const double> sample) {
  if (sample.empty()) throw DomainError("mle requires a non-empty sample");
  double sum = 0.0;
  for (double x : sample) {
    if (!m.support.contains(x)) {
      throw DomainError(m.name + ": sample point " + std::to_string(x) +
                        " lies outside the support");
    }
    sum += m.T(x);
  }
  return mle_from_mean_t(m, sum / static_cast<double>(sample.size()));
}

double sup_abs_d_second_grid(const ExpFamilyModel& m, double theta0, double eps) {
  if (!(eps > 0.0) || !m.param_space.contains_ball(theta0, eps)) {
    throw DomainError(m.name + ": the eps-ball around theta0 leaves the parameter space");
  }
  constexpr int kPoints = 10001;
  double best = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double t = theta0 - eps + 2.0 * eps * i / (kPoints - 1);
    best = std::max(best, std::fabs(d_second(m, t)));
  }
  return best;
}

double sup_abs_d_second(const ExpFamilyModel& m, double theta0, double eps) {
  if (!(eps > 0.0) || !m.param_space.contains_ball(theta0, eps)) {
    throw DomainError(m.name + ": the eps-ball around theta0 leaves the parameter space");
  }
  if (m.closed_sup_d2) return m.closed_sup_d2(theta0, eps);
  return sup_abs_d_second_grid(m, theta0, eps);
}

std::vector<double> parameter_grid(const Interval& space, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  const bool lo_fin = std::isfinite(space.lo);
  const bool hi_fin = std::isfinite(space.hi);
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / (points - 1);
    double t;
    if (lo_fin && hi_fin) {
      t = space.lo + (space.hi - space.lo) * (i + 1.0) / (points + 1.0);
    } else if (lo_fin) {
      t = space.lo + std::pow(10.0, -3.0 + 6.0 * u);
    } else if (hi_fin) {
      t = space.hi - std::pow(10.0, -3.0 + 6.0 * u);
    } else {
      t = -1e3 + 2e3 * u;
    }
    grid.push_back(t);
  }
  return grid;
}

bool is_canonical(const ExpFamilyModel& m) {
  for (double t : parameter_grid(m.param_space)) {
    if (std::fabs(m.k(t) - t) > 1e-12 * std::max(1.0, std::fabs(t)) ||
        std::fabs(m.dk(t) - 1.0) > 1e-12) {
      return false;
    }
  }
  return true;
}

FunctionalModel as_functional(const ExpFamilyModel& m) {
  FunctionalModel f;
  f.name = m.name;
  f.q = [m](double t) { return d_value(m, t); };
  f.dq = [m](double t) { return d_prime(m, t); };
  f.d2q = [m](double t) { return d_second(m, t); };
  f.g = m.T;
  f.sup_abs_q_second = [m](double theta0, double eps) {
    return sup_abs_d_second(m, theta0, eps);
  };
  f.q_is_identity = true;
  for (double t : parameter_grid(m.param_space)) {
    if (std::fabs(d_value(m, t) - t) > 1e-12 * std::max(1.0, std::fabs(t))) {
      f.q_is_identity = false;
      break;
    }
  }
  return f;
}

}  // namespace mlebound
