#include "mlebound/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mlebound/error.hpp"

namespace mlebound::specfun {

namespace {

// Lanczos rational approximation with g = 607/128 and 13 terms; accurate to
// a few ulps of Gamma(x) over x > 0.
constexpr int kLanczosTerms = 13;
constexpr double kLanczosG = 6.024680040776729583740234375;
constexpr std::array<double, kLanczosTerms> kLanczosNum = {
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408};
constexpr std::array<double, kLanczosTerms> kLanczosDen = {
    0.0,         39916800.0, 120543840.0, 150917976.0, 105258076.0,
    45995730.0,  13339535.0, 2637558.0,   357423.0,    32670.0,
    1925.0,      66.0,       1.0};

double lanczos_sum(double x) {
  double num = 0.0;
  double den = 0.0;
  if (x < 5.0) {
    for (int i = kLanczosTerms - 1; i >= 0; --i) {
      num = num * x + kLanczosNum[i];
      den = den * x + kLanczosDen[i];
    }
  } else {
    // Horner in 1/x keeps large arguments from overflowing.
    for (int i = 0; i < kLanczosTerms; ++i) {
      num = num / x + kLanczosNum[i];
      den = den / x + kLanczosDen[i];
    }
  }
  return num / den;
}

// Stirling correction ln Gamma(x) - [(x - 1/2) ln x - x + ln sqrt(2 pi)],
// truncated after the B_16 term. Used only for x >= 20 where the first
// omitted term is below 1e-17.
double stirling_tail(double x) {
  constexpr std::array<double, 8> c = {
      1.0 / 12.0,        -1.0 / 360.0,     1.0 / 1260.0,
      -1.0 / 1680.0,     1.0 / 1188.0,     -691.0 / 360360.0,
      1.0 / 156.0,       -3617.0 / 122400.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double acc = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    acc = acc * inv2 + c[static_cast<std::size_t>(i)];
  }
  return acc * inv;
}

struct Panel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

class AdaptiveSimpson {
 public:
  AdaptiveSimpson(const RealFn& f, const QuadratureSpec& spec)
      : f_(f), spec_(spec) {}

  QuadratureResult run(std::span<const double> points) {
    // Seed with a uniform pre-partition so narrow features are not missed by
    // a single coarse panel, then set the global tolerance from the coarse
    // estimate.
    constexpr int kInitialPanels = 32;
    std::vector<Panel> panels;
    double coarse = 0.0;
    for (std::size_t s = 0; s + 1 < points.size(); ++s) {
      const double lo = points[s];
      const double hi = points[s + 1];
      const double h = (hi - lo) / kInitialPanels;
      double fa = eval(lo);
      for (int i = 0; i < kInitialPanels; ++i) {
        const double a = lo + h * i;
        const double b = (i + 1 == kInitialPanels) ? hi : lo + h * (i + 1);
        const double m = 0.5 * (a + b);
        const double fm = eval(m);
        const double fb = eval(b);
        const double whole = simpson(a, b, fa, fm, fb);
        panels.push_back({a, m, b, fa, fm, fb, whole});
        coarse += whole;
        fa = fb;
      }
    }
    const double tol =
        std::max(spec_.abs_tol, spec_.rel_tol * std::fabs(coarse));
    const double per_panel = tol / static_cast<double>(panels.size());
    for (const auto& p : panels) {
      refine(p, per_panel, 0);
    }
    if (failed_) {
      throw ConvergenceError(
          "adaptive quadrature did not converge within " +
          std::to_string(spec_.max_refinements) + " refinements near x = " +
          std::to_string(fail_x_));
    }
    return {sum_.value(), err_, evals_};
  }

 private:
  struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
      const double y = x - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    double value() const { return s; }
  };

  double eval(double x) {
    ++evals_;
    const double y = f_(x);
    return std::isfinite(y) ? y : 0.0;
  }

  void refine(const Panel& p, double tol, int depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
    const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
    const double diff = left + right - p.whole;
    if (std::fabs(diff) <= 15.0 * tol) {
      sum_.add(left + right + diff / 15.0);
      err_ += std::fabs(diff) / 15.0;
      return;
    }
    const bool exhausted = depth + 1 >= spec_.max_refinements ||
                           !(p.a < lm && lm < p.m && p.m < rm && rm < p.b);
    if (exhausted) {
      if (!failed_) fail_x_ = p.m;
      failed_ = true;
      sum_.add(left + right);
      err_ += std::fabs(diff) / 15.0;
      return;
    }
    refine({p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1);
    refine({p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1);
  }

  const RealFn& f_;
  const QuadratureSpec& spec_;
  Kahan sum_;
  double err_ = 0.0;
  long evals_ = 0;
  bool failed_ = false;
  double fail_x_ = 0.0;
};

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_refinements < 1 ||
      !(truncation_radius > 0.0)) {
    throw DomainError(
        "QuadratureSpec requires abs_tol > 0, rel_tol > 0, "
        "max_refinements >= 1 and truncation_radius > 0");
  }
}

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("log_gamma requires a finite positive argument, got " +
                      std::to_string(x));
  }
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x >= 20.0) {
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) +
           stirling_tail(x);
  }
  double r = std::log(lanczos_sum(x)) - kLanczosG;
  r += (x - 0.5) * (std::log(x + kLanczosG - 0.5) - 1.0);
  return r;
}

double log_gamma_ratio_scaled(double z, double a, double b) {
  const double za = z + a;
  const double zb = z + b;
  if (!(za > 0.0) || !(zb > 0.0) || !std::isfinite(z)) {
    throw DomainError("gamma_ratio requires z + a > 0 and z + b > 0");
  }
  if (z > 0.0 && a != b && a - b == std::round(a - b) && std::fabs(a - b) <= 16.0) {
    // Integer shift: Gamma(z + b + k) / Gamma(z + b) is a finite product.
    const double lo = std::min(a, b);
    const int k = static_cast<int>(std::fabs(a - b));
    double sum = 0.0;
    for (int j = 0; j < k; ++j) sum += std::log1p((lo + j) / z);
    return a > b ? sum : -sum;
  }
  if (std::min(za, zb) < 20.0 || z <= 0.0) {
    return log_gamma(za) - log_gamma(zb) - (a - b) * std::log(z);
  }
  // Stirling difference with the ln z pieces cancelled analytically.
  return (za - 0.5) * std::log1p(a / z) - (zb - 0.5) * std::log1p(b / z) -
         (a - b) + (stirling_tail(za) - stirling_tail(zb));
}

double gamma_ratio(double z, double a, double b) {
  const double za = z + a;
  const double zb = z + b;
  if (!(za > 0.0) || !(zb > 0.0) || !std::isfinite(z)) {
    throw DomainError("gamma_ratio requires z + a > 0 and z + b > 0");
  }
  if (z <= 0.0) return std::exp(log_gamma(za) - log_gamma(zb));
  return std::exp(log_gamma_ratio_scaled(z, a, b) + (a - b) * std::log(z));
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

QuadratureResult integrate(const RealFn& f, double a, double b,
                           const QuadratureSpec& spec) {
  const std::array<double, 2> pts = {a, b};
  return integrate(f, std::span<const double>(pts), spec);
}

QuadratureResult integrate(const RealFn& f, std::span<const double> breakpoints,
                           const QuadratureSpec& spec) {
  spec.validate();
  if (breakpoints.size() < 2) {
    throw DomainError("integrate needs at least two breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i]) ||
        (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))) {
      throw DomainError("integration breakpoints must be finite and increasing");
    }
  }
  AdaptiveSimpson engine(f, spec);
  return engine.run(breakpoints);
}

QuadratureResult integrate_upper_half_line(const RealFn& f, double a,
                                           double scale,
                                           const QuadratureSpec& spec) {
  if (!(scale > 0.0)) throw DomainError("half-line scale must be positive");
  const RealFn mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double u = 1.0 - t;
    return f(a + scale * t / u) * scale / (u * u);
  };
  return integrate(mapped, 0.0, 1.0, spec);
}

QuadratureResult integrate_lower_half_line(const RealFn& f, double b,
                                           double scale,
                                           const QuadratureSpec& spec) {
  const RealFn reflected = [&](double x) { return f(2.0 * b - x); };
  return integrate_upper_half_line(reflected, b, scale, spec);
}

double integrate_real_line(const RealFn& f, const QuadratureSpec& spec) {
  spec.validate();
  const double r = spec.truncation_radius;
  const std::array<double, 3> pts = {-r, 0.0, r};
  return integrate(f, std::span<const double>(pts), spec).value;
}

}  // namespace mlebound::specfun
