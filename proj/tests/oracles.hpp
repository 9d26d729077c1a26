#pragma once

// Reference computations used only by the tests. They deliberately share no
// code with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// Composite 20-point Gauss-Legendre on [a, b] with `panels` equal panels.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 400) {
  static const auto rule = gauss_legendre(20);
  const double hw = (b - a) / panels / 2.0;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (2.0 * p + 1.0) * hw;
    for (std::size_t i = 0; i < rule.first.size(); ++i) {
      total += rule.second[i] * f(mid + hw * rule.first[i]);
    }
  }
  return total * hw;
}

// Integral over [a, a + L] with panels graded by the square of a uniform map,
// adequate for integrands that decay like exp(-x).
inline double integrate_tail(const std::function<double(double)>& f, double a,
                             double length, int panels = 2000) {
  return integrate([&](double u) { return f(a + length * u * u) * 2.0 * length * u; },
                   0.0, 1.0, panels);
}

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Phi(x) from the Taylor series of the error function, valid for |x| < 6.
inline double normal_cdf_series(double x) {
  const double z = x / std::numbers::sqrt2;
  double term = z, sum = z;
  for (int k = 1; k < 200; ++k) {
    term *= -z * z / k;
    const double add = term / (2.0 * k + 1.0);
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
  }
  return 0.5 + sum / std::sqrt(std::numbers::pi);
}

// Central difference derivative.
inline double derivative(const std::function<double(double)>& f, double x,
                         double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace oracle
