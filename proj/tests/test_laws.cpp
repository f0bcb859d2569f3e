#include "doctest.h"

#include <cmath>

#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/laws.hpp"

using namespace chaos_bounds;

TEST_CASE("offspring strings round-trip") {
  CHECK(describe(parse_offspring("poisson:0.5")) == "poisson:0.5");
  CHECK(describe(parse_offspring("binomial:2,0.25")) == "binomial:2,0.25");
  CHECK(offspring_mean(parse_offspring("binomial:2,0.25")) == doctest::Approx(0.5));
  CHECK(offspring_mean(parse_offspring("none")) == 0.0);
  CHECK(offspring_mean(parse_offspring("factorial:0.3,0.1")) == doctest::Approx(0.3));
}

TEST_CASE("offspring validation") {
  CHECK_THROWS_AS(parse_offspring("poisson:1.2"), SupercriticalError);
  CHECK_THROWS_AS(parse_offspring("binomial:2,0.6"), SupercriticalError);
  CHECK_THROWS_AS(parse_offspring("poisson:-1"), DomainError);
  CHECK_THROWS_AS(parse_offspring("binomial:1.5,0.2"), DomainError);
  CHECK_THROWS_AS(parse_offspring("geometric:0.5"), DomainError);
  CHECK_THROWS_AS(parse_offspring("poisson:abc"), DomainError);
  CHECK_THROWS_AS(parse_offspring("poisson:0.1,0.2"), DomainError);
}

TEST_CASE("mark absolute moments") {
  CHECK(abs_moment(ConstantMark{-2.0}, 3) == doctest::Approx(8.0));
  CHECK(abs_moment(UniformMark{2.0}, 2) == doctest::Approx(4.0 / 3.0));
  CHECK(abs_moment(ExponentialMark{2.0}, 3) == doctest::Approx(6.0 * 8.0));
  // E|G|^m for G ~ N(0, 1): sqrt(2/pi), 1, 2 sqrt(2/pi), 3.
  CHECK(abs_moment(GaussianMark{1.0}, 1) == doctest::Approx(std::sqrt(2.0 / M_PI)));
  CHECK(abs_moment(GaussianMark{1.0}, 2) == doctest::Approx(1.0));
  CHECK(abs_moment(GaussianMark{1.0}, 3) == doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)));
  CHECK(abs_moment(GaussianMark{2.0}, 4) == doctest::Approx(3.0 * 16.0));
  CHECK(abs_moment(CustomMark{{1.0, 2.0, 5.0}}, 3) == 5.0);
  CHECK_THROWS_AS(abs_moment(CustomMark{{1.0, 2.0}}, 3), InsufficientMoments);
}

TEST_CASE("mark strings") {
  CHECK(describe(parse_mark("exp:1")) == "exp:1");
  CHECK(describe(parse_mark("custom:1,2,6")) == "custom:1,2,6");
  CHECK_THROWS_AS(parse_mark("uniform:-1"), DomainError);
  CHECK_THROWS_AS(parse_mark("cauchy:1"), DomainError);
}

TEST_CASE("Lyapunov monotonicity of absolute moments") {
  const std::vector<double> gauss = abs_moments(GaussianMark{1.0}, 8);
  CHECK(lyapunov_consistent(gauss));
  const std::vector<double> broken{1.0, 0.5, 2.0};  // (E M²)^{1/2} < E|M|
  CHECK_FALSE(lyapunov_consistent(broken));
}
