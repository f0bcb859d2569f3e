#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/gaussian_bounds.hpp"

using namespace chaos_bounds;

TEST_CASE("first chaos") {
  const auto r = first_chaos_bounds(0.1, 100.0);
  CHECK(r.dw_bound == doctest::Approx(0.1));
  CHECK(r.dk_bound == doctest::Approx(10.3238858).epsilon(1e-8));
  CHECK(r.vacuous);
  CHECK_FALSE(first_chaos_bounds(0.01, 1e-4).vacuous);
  CHECK_THROWS_AS(first_chaos_bounds(-1.0, 1.0), DomainError);
}

TEST_CASE("Kolmogorov bound uses the constant 4 until the fourth-moment term dominates") {
  CHECK(kolmogorov_bound(1.0, 0.0) == doctest::Approx(3.0));
  // (4 r4 + 2)^{1/4} = 4 at r4 = 63.5
  CHECK(kolmogorov_bound(1.0, 63.5) == doctest::Approx(3.0 + std::sqrt(63.5)));
  CHECK(kolmogorov_bound(1.0, 254.0 / 4.0 + 100.0) > 3.0 + std::sqrt(163.5));
}

TEST_CASE("shot noise") {
  const auto r = shotnoise_bounds({4.0, 1.0, 2.0});
  CHECK(r.dw_bound == doctest::Approx(1.0 / 8.0));
  CHECK(r.dk_bound == doctest::Approx(3.0 / 8.0 + std::sqrt(2.0 / 16.0)));
  CHECK_THROWS_AS(shotnoise_bounds({0.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("standardized kernel moments") {
  const auto s = standardized_kernel_moments({{2, 4.0}, {3, 8.0}, {4, 32.0}});
  CHECK(s[0].second == 1.0);
  CHECK(s[1].second == doctest::Approx(1.0));
  CHECK(s[2].second == doctest::Approx(2.0));
  CHECK_THROWS_AS(standardized_kernel_moments({{3, 1.0}}), DomainError);
}

TEST_CASE("compound Poisson with unit clusters and marks") {
  const auto r = hawkes_poisson_bounds({1.0, 1e4}, 0.0, ConstantMark{1.0});
  CHECK(r.dw_bound == doctest::Approx(0.01));
  CHECK(r.dk_bound == doctest::Approx(0.04));
  CHECK_FALSE(r.vacuous);
  CHECK(cluster_moment_bound(2.0, 3.0, 5.0) == 30.0);
}

TEST_CASE("Hawkes with Poisson offspring") {
  const auto r = hawkes_poisson_bounds({1.0, 1e6}, 0.5, ConstantMark{1.0});
  CHECK(r.dw_bound == doctest::Approx(0.064).epsilon(1e-12));
  CHECK(std::abs(r.dk_bound - 0.2208444) <= 1e-6);
  // The generic path through the recursion gives the same numbers.
  const auto g = hawkes_bounds({1.0, 1e6}, PoissonOffspring{0.5}, ConstantMark{1.0});
  CHECK(g.dw_bound == doctest::Approx(r.dw_bound).epsilon(1e-12));
  CHECK(g.dk_bound == doctest::Approx(r.dk_bound).epsilon(1e-12));
  // At lambda leb = 10^4 the Wasserstein bound is E Z³ / 100.
  CHECK(hawkes_poisson_bounds({1.0, 1e4}, 0.5, ConstantMark{1.0}).dw_bound ==
        doctest::Approx(0.64));
}

TEST_CASE("Hawkes with binomial offspring") {
  const auto r = hawkes_binomial_bounds({1.0, 1e6}, 1, 0.5, ConstantMark{1.0});
  CHECK(r.dw_bound == doctest::Approx(26.0 / 1000.0));
  CHECK(r.dk_bound == doctest::Approx(3.0 * 0.026 + std::sqrt(150.0 / 1e6)));
  CHECK_THROWS_AS(hawkes_binomial_bounds({1.0, 1.0}, 2, 0.6, ConstantMark{1.0}), SupercriticalError);
}

TEST_CASE("bounds shrink as the observed mass grows") {
  double prev_dw = INFINITY;
  double prev_dk = INFINITY;
  for (double mass = 1e2; mass <= 1e8; mass *= 10.0) {
    const auto r = hawkes_poisson_bounds({1.0, mass}, 0.3, ExponentialMark{1.0});
    CHECK(r.dw_bound < prev_dw);
    CHECK(r.dk_bound < prev_dk);
    CHECK(r.dk_bound >= r.dw_bound);
    prev_dw = r.dw_bound;
    prev_dk = r.dk_bound;
  }
  const auto a = hawkes_poisson_bounds({1.0, 1e4}, 0.3, UniformMark{1.0});
  const auto b = hawkes_poisson_bounds({4.0, 1e4}, 0.3, UniformMark{1.0});
  CHECK(b.dw_bound == doctest::Approx(a.dw_bound / 2.0));
}

TEST_CASE("marks are scale free") {
  const auto a = hawkes_poisson_bounds({1.0, 1e4}, 0.3, ExponentialMark{1.0});
  const auto b = hawkes_poisson_bounds({1.0, 1e4}, 0.3, ExponentialMark{7.5});
  CHECK(a.dw_bound == doctest::Approx(b.dw_bound));
  CHECK(a.dk_bound == doctest::Approx(b.dk_bound));
}

TEST_CASE("invalid cluster inputs") {
  CHECK_THROWS_AS(hawkes_poisson_bounds({1.0, 1e4}, 1.0, ConstantMark{1.0}), SupercriticalError);
  CHECK_THROWS_AS(hawkes_poisson_bounds({1.0, 0.0}, 0.5, ConstantMark{1.0}), DomainError);
  CHECK_THROWS_AS(hawkes_poisson_bounds({1.0, 1e4}, 0.5, ConstantMark{0.0}), DomainError);
  CHECK_THROWS_AS(compound_cluster_bounds({1.0, 1e4}, CustomMark{{1.0, 1.0}}, 1.0, 1.0),
                  InsufficientMoments);
}

TEST_CASE("custom marks violating Lyapunov are flagged") {
  const auto r = compound_cluster_bounds({1.0, 1e4}, CustomMark{{1.0, 4.0, 1.0, 20.0}}, 1.0, 1.0);
  CHECK(r.warnings.size() == 1);
  const auto ok = compound_cluster_bounds({1.0, 1e4}, CustomMark{{1.0, 1.0, 1.0, 1.0}}, 1.0, 1.0);
  CHECK(ok.warnings.empty());
}

TEST_CASE("Hertzian integral against polar quadrature") {
  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::gauss_kronrod;
  for (double R : {0.5, 1.0, 2.0}) {
    for (double alpha : {2.5, 3.0, 4.0}) {
      for (int m = 1; m <= 4; ++m) {
        const double am = alpha * m;
        // The integrand is radial, but integrate over the angle as well.
        auto radial = [&](double r) { return std::pow(std::max(R, r), -am) * r; };
        const double inner = gauss_kronrod<double, 31>::integrate(radial, 0.0, R, 15, 1e-13);
        const double outer = exp_sinh<double>().integrate(
            [&](double t) { return radial(R + t); }, 0.0, std::numeric_limits<double>::infinity());
        const double total = gauss_kronrod<double, 15>::integrate(
            [&](double) { return inner + outer; }, 0.0, 2.0 * std::numbers::pi, 5, 1e-14);
        CHECK(std::abs(total - hertzian_integral(R, alpha, m)) <=
              1e-6 * hertzian_integral(R, alpha, m));
      }
    }
  }
}

TEST_CASE("Hertzian integral domain") {
  CHECK_THROWS_AS(hertzian_integral(1.0, 1.0, 3), DomainError);
  CHECK_THROWS_AS(hertzian_integral(1.0, 1.5, 1), DivergentIntegral);
  CHECK_THROWS_AS(hertzian_integral(1.0, 2.0, 1), DivergentIntegral);
  CHECK_NOTHROW(hertzian_integral(1.0, 2.0, 2));
  CHECK_THROWS_AS(hertzian_integral(0.0, 4.0, 2), DomainError);
}

TEST_CASE("interference bounds") {
  const auto r = hertzian_interference_bounds(50.0, 1.0, 4.0, ExponentialMark{1.0});
  CHECK(r.dw_bound == doctest::Approx(0.13192268).epsilon(1e-7));
  CHECK(r.dk_bound == doctest::Approx(0.55246945).epsilon(1e-7));
  // Quadrupling the intensity halves the Wasserstein bound.
  const auto q = hertzian_interference_bounds(200.0, 1.0, 4.0, ExponentialMark{1.0});
  CHECK(q.dw_bound == doctest::Approx(r.dw_bound / 2.0));
  CHECK_THROWS_AS(interference_bounds(0.0, 1, 1, 1, 1, 1, 1), DomainError);
}
