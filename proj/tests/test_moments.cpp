#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mlebound/error.hpp"
#include "mlebound/models.hpp"
#include "mlebound/moments.hpp"
#include "mlebound/specfun.hpp"
#include "oracles.hpp"

using namespace mlebound;

namespace {

// E|X^p - (d/p) theta^p|^3 for GG(theta, d, p) by Gauss-Legendre on the
// gamma variable Y = (X/theta)^p ~ Gamma(d/p, 1).
double gg_exact_third(double theta, double d, double p) {
  const double a = d / p;
  const double lg = std::lgamma(a);
  auto f = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double dens = std::exp((a - 1.0) * std::log(y) - y - lg);
    return std::pow(std::fabs(y - a), 3.0) * dens;
  };
  // Split at the kink y = a; the left piece is mapped to soften y^(a-1).
  auto left = [&](double u) {
    const double y = a * std::pow(u, 4.0);
    return f(y) * 4.0 * a * std::pow(u, 3.0);
  };
  const double v = oracle::integrate(left, 0.0, 1.0, 400) +
                   oracle::integrate_tail(f, a, 200.0 + 20.0 * a, 4000);
  return std::pow(theta, 3.0 * p) * v;
}

}  // namespace

TEST_CASE("exponential third absolute moment constant") {
  const double c = exp_third_abs_moment_constant();
  CHECK(c == doctest::Approx(12.0 / std::numbers::e - 2.0).epsilon(1e-15));
  CHECK(std::fabs(c - 2.41456) < 1e-5);
  for (double mu : {0.5, 1.0, 3.0}) {
    auto f = [mu](double x) { return std::pow(std::fabs(x - mu), 3.0) * std::exp(-x / mu) / mu; };
    const double want = oracle::integrate(f, 0.0, mu, 200) +
                        oracle::integrate_tail(f, mu, 200.0 * mu, 4000);
    CHECK(want == doctest::Approx(c * mu * mu * mu).epsilon(1e-10));
    const auto nc = exp_noncanonical_model();
    CHECK(third_abs_moment_quadrature(nc, mu) == doctest::Approx(want).epsilon(1e-8));
    CHECK(third_abs_moment(nc, mu) == doctest::Approx(want).epsilon(1e-12));
    const auto can = exp_canonical_model();
    CHECK(third_abs_moment_quadrature(can, 1.0 / mu) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("Laplace and normal third moments") {
  const auto lap = laplace_scale_model();
  for (double s : {0.5, 2.0}) {
    const double want = (12.0 / std::numbers::e - 2.0) * s * s * s;
    CHECK(third_abs_moment_quadrature(lap, s) == doctest::Approx(want).epsilon(1e-8));
    CHECK(third_abs_moment(lap, s) == doctest::Approx(want).epsilon(1e-12));
  }
  for (double sigma : {1.0, 2.5}) {
    const auto nm = normal_mean_model(sigma);
    const double want = 2.0 * std::sqrt(2.0 / std::numbers::pi) * std::pow(sigma, 3.0);
    CHECK(want / std::pow(sigma, 3.0) == doctest::Approx(1.5957691).epsilon(1e-7));
    CHECK(third_abs_moment_quadrature(nm, 0.7) == doctest::Approx(want).epsilon(1e-8));
    CHECK(third_abs_moment(nm, 0.7) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("normal variance third moment") {
  // T = (X - mu)^2 with X ~ N(mu, theta): E|T - theta|^3 = theta^3 E|Z^2 - 1|^3.
  auto f = [](double z) { return std::pow(std::fabs(z * z - 1.0), 3.0) * oracle::normal_pdf(z); };
  const double c = 2.0 * (oracle::integrate(f, 0.0, 1.0, 200) + oracle::integrate(f, 1.0, 40.0, 2000));
  const auto m = normal_variance_model(0.3);
  for (double t : {0.5, 2.0}) {
    CHECK(third_abs_moment(m, t) == doctest::Approx(c * t * t * t).epsilon(1e-8));
  }
}

TEST_CASE("GG third moment quadrature matches oracle") {
  for (auto [d, p] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}, {3.0, 2.0}, {2.0, 1.5}}) {
    const auto m = generalized_gamma_model(d, p);
    for (double theta : {0.8, 1.0, 1.7}) {
      CHECK_MESSAGE(third_abs_moment_quadrature(m, theta) ==
                        doctest::Approx(gg_exact_third(theta, d, p)).epsilon(1e-7),
                    "d=" << d << " p=" << p << " theta=" << theta);
    }
  }
}

TEST_CASE("Hoelder GG moment bound") {
  CHECK(third_abs_moment_holder_gg({1.0, 1.0, 1.0}) ==
        doctest::Approx(std::pow(9.0, 0.75)).epsilon(1e-14));
  CHECK(third_abs_moment_holder_gg({1.0, 1.0, 1.0}) == doctest::Approx(5.19615).epsilon(1e-6));
  CHECK(third_abs_moment_holder_gg({2.0, 1.0, 1.0}) ==
        doctest::Approx(8.0 * std::pow(9.0, 0.75)).epsilon(1e-14));
  for (auto [d, p] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}, {3.0, 2.0}, {1.0, 0.5},
                      {4.0, 3.0}, {0.5, 0.5}}) {
    for (double theta : {0.5, 1.0, 2.0}) {
      const double exact = third_abs_moment_quadrature(generalized_gamma_model(d, p), theta);
      CHECK(third_abs_moment_holder_gg({theta, d, p}) >= exact);
    }
  }
}

TEST_CASE("mse_exp_canonical") {
  CHECK(mse_exp_canonical(10, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(mse_exp_canonical(3, 2.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(mse_exp_canonical(2, 1.0), DomainError);
  // Asymptotic efficiency: n * mse * i -> 1.
  for (long n = 100; n <= 100000; n *= 10) {
    for (double t : {0.5, 2.0}) {
      const double info = 1.0 / (t * t);
      CHECK(std::fabs(n * mse_exp_canonical(n, t) * info - 1.0) <= 10.0 / n);
    }
  }
}

TEST_CASE("mse_gg closed forms") {
  CHECK(mse_gg(10, {1.0, 1.0, 1.0}) == doctest::Approx(0.1).epsilon(1e-13));
  const double two_minus_root_pi = 2.0 - std::sqrt(std::numbers::pi);
  CHECK(mse_gg(1, {1.0, 2.0, 2.0}) == doctest::Approx(two_minus_root_pi).epsilon(1e-13));
  CHECK(mse_gg(1, {1.0, 2.0, 2.0}) == doctest::Approx(0.2275461).epsilon(1e-7));
  for (long n = 1; n <= 10000; n = n < 20 ? n + 1 : n * 3) {
    CHECK(std::fabs(mse_gg(n, {1.0, 1.0, 1.0}) - 1.0 / n) <= 1e-12);
    CHECK(oracle::rel_err(mse_gg(n, {1.0, 1.0, 1.0}), 1.0 / n) <= 1e-13);
    CHECK(mse_gg(n, {3.0, 1.0, 1.0}) == doctest::Approx(9.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("mse_gg matches the direct log-gamma formula") {
  for (auto [d, p] : {std::pair{2.0, 1.5}, {1.0, 2.0}, {3.0, 0.5}, {0.7, 1.3}}) {
    for (long n : {1L, 5L, 40L}) {
      const double a = n * d / p;
      const double r1 = std::exp(std::lgamma(a + 1.0 / p) - std::lgamma(a));
      const double r2 = std::exp(std::lgamma(a + 2.0 / p) - std::lgamma(a));
      const double c = std::pow(1.0 / a, 1.0 / p);
      const double want = 1.0 - 2.0 * c * r1 + c * c * r2;
      CHECK(mse_gg_factor(n, d, p) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("n * mse_gg stays bounded and tends to 1 / (d p)") {
  double lo = 1e300, hi = 0.0;
  for (long n = 10; n <= 100000; n *= 10) {
    const double v = n * mse_gg_factor(n, 2.0, 1.5);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 1.2);
  CHECK(100000 * mse_gg_factor(100000, 2.0, 1.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("mse_exact catalog") {
  CHECK(*mse_exact(exp_noncanonical_model(), 2.0, 10) == doctest::Approx(0.4));
  CHECK(*mse_exact(laplace_scale_model(), 2.0, 10) == doctest::Approx(0.4));
  CHECK(*mse_exact(normal_mean_model(3.0), 1.0, 9) == doctest::Approx(1.0));
  CHECK(*mse_exact(normal_variance_model(0.0), 2.0, 8) == doctest::Approx(1.0));
  CHECK(*mse_exact(exp_canonical_model(), 1.0, 10) == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(mse_exact(exp_canonical_model(), 1.0, 2).has_value());
  CHECK(*mse_exact(weibull_scale_model(2.0), 1.0, 10) ==
        doctest::Approx(mse_gg(10, {1.0, 2.0, 2.0})));
}

TEST_CASE("mse_monte_carlo examples") {
  SUBCASE("canonical exponential, n = 10") {
    const auto e = mse_monte_carlo(exp_canonical_model(), 1.0, 10, 400000, 1);
    CHECK(std::fabs(e.mean - 1.0 / 6.0) < 3.0 * e.standard_error);
  }
  SUBCASE("canonical exponential, n = 50") {
    const auto e = mse_monte_carlo(exp_canonical_model(), 1.0, 50, 1000000, 2);
    CHECK(std::fabs(e.mean - mse_exp_canonical(50, 1.0)) < 3.0 * e.standard_error);
  }
  SUBCASE("non-canonical exponential, n = 10") {
    const auto e = mse_monte_carlo(exp_noncanonical_model(), 2.0, 10, 200000, 3);
    CHECK(std::fabs(e.mean - 0.4) < 3.0 * e.standard_error);
  }
  SUBCASE("GG(2, 2), n = 20") {
    const auto e = mse_monte_carlo(generalized_gamma_model(2.0, 2.0), 1.0, 20, 200000, 4);
    CHECK(std::fabs(e.mean - mse_gg(20, {1.0, 2.0, 2.0})) < 3.0 * e.standard_error);
  }
}

TEST_CASE("Monte Carlo MSE agrees with every closed form") {
  struct C {
    ExpFamilyModel m;
    double theta;
    long n;
  };
  const C cases[] = {
      {normal_mean_model(2.0), 1.0, 7},     {normal_variance_model(0.5), 2.0, 12},
      {weibull_scale_model(1.5), 1.3, 9},   {laplace_scale_model(), 0.8, 15},
      {exp_canonical_model(), 2.0, 11},     {exp_noncanonical_model(), 3.0, 6},
      {generalized_gamma_model(3.0, 0.5), 1.0, 10},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const auto e = mse_monte_carlo(c.m, c.theta, c.n, 100000, seed++);
    const double want = *mse_exact(c.m, c.theta, c.n);
    CHECK_MESSAGE(std::fabs(e.mean - want) < 3.0 * e.standard_error, c.m.name);
  }
}

TEST_CASE("mse_monte_carlo determinism and guards") {
  const auto m = exp_noncanonical_model();
  const auto a = mse_monte_carlo(m, 2.0, 10, 20000, 9, 1);
  const auto b = mse_monte_carlo(m, 2.0, 10, 20000, 9, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.standard_error == b.standard_error);
  CHECK_THROWS_AS(mse_monte_carlo(m, 2.0, 10, 999, 9), DomainError);
}

TEST_CASE("expected_h_of_z") {
  const double eh = expected_h_of_z(paper_test_function());
  CHECK(std::fabs(eh - 0.379) < 5e-4);
  CHECK(std::fabs(eh - 0.37894) < 1e-5);
  auto f = [](double z) { return oracle::normal_pdf(z) / (z * z + 2.0); };
  CHECK(eh == doctest::Approx(2.0 * oracle::integrate(f, 0.0, 40.0, 2000)).epsilon(1e-10));
  TestFunction c{"const", [](double) { return 0.25; }, 0.25, 0.0};
  CHECK(expected_h_of_z(c) == doctest::Approx(0.25).epsilon(1e-10));
  TestFunction odd{"odd", [](double x) { return x / (x * x + 2.0); }, 1.0, 1.0};
  CHECK(std::fabs(expected_h_of_z(odd)) < 1e-10);
  CHECK(std::fabs(expected_h_of_z(tanh_test_function())) < 1e-10);
}

TEST_CASE("model_expectation normalizes each built-in") {
  for (const auto& m : {exp_canonical_model(), exp_noncanonical_model(), laplace_scale_model(),
                        normal_mean_model(1.0), normal_variance_model(1.0),
                        weibull_scale_model(0.7), generalized_gamma_model(2.0, 1.5)}) {
    CHECK_MESSAGE(model_expectation(m, 1.3, [](double) { return 1.0; }) ==
                      doctest::Approx(1.0).epsilon(1e-9),
                  m.name);
  }
}
