#include "doctest.h"

#include <cmath>
#include <limits>

#include "chaos_bounds/deviations.hpp"
#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/progeny.hpp"

using namespace chaos_bounds;

TEST_CASE("tabulated mark gammas") {
  CHECK(mark_gamma(ConstantMark{2.0}) == 0.0);
  CHECK(mark_gamma(UniformMark{1.0}) == 1.0);
  CHECK(mark_gamma(ExponentialMark{1.0}) == 1.0);
  CHECK(mark_gamma(GaussianMark{1.0}) == 0.5);
  CHECK_THROWS_AS(mark_gamma(CustomMark{{1.0, 1.0, 1.0}}), UnknownFamily);
}

TEST_CASE("tabulated gammas satisfy the moment growth condition") {
  const std::vector<MarkLaw> marks{ConstantMark{-3.0}, UniformMark{2.0}, ExponentialMark{0.5},
                                   GaussianMark{3.0}};
  for (const auto& mark : marks) {
    const auto check = verify_mark_gamma(abs_moments(mark, 20), mark_gamma(mark), 20);
    CHECK(check.holds);
    CHECK_FALSE(check.first_fail.has_value());
  }
}

TEST_CASE("moment growth failures are located") {
  // E|M|³ / (E M²)^{3/2} = 6 / 2^{3/2} > 1 for exponential marks.
  const auto check = verify_mark_gamma(abs_moments(ExponentialMark{1.0}, 8), 0.0, 8);
  CHECK_FALSE(check.holds);
  CHECK(check.first_fail == 3);
  const std::vector<double> late{1.0, 1.0, 1.0, 1.0, 1e6};
  CHECK(verify_mark_gamma(late, 1.0, 5).first_fail == 5);
  CHECK_THROWS_AS(verify_mark_gamma(late, 1.0, 6), InsufficientMoments);
  CHECK_THROWS_AS(verify_mark_gamma(late, 1.0, 2), DomainError);
}

TEST_CASE("Delta for Poisson offspring") {
  const auto d = delta_poisson(0.5, 1e4);
  CHECK(std::abs(d.delta - 0.36027583) <= 1e-6);
  CHECK(d.case_label == "(ii)");
  CHECK(d.nu == doctest::Approx(0.5 - 1.0 + std::log(2.0)));
  const auto small = delta_poisson(0.1, 1e4);
  CHECK(small.case_label == "(i)");
  CHECK(small.delta == doctest::Approx(10.0));
  CHECK_THROWS_AS(delta_poisson(1.0, 1e4), SupercriticalError);
  CHECK_THROWS_AS(delta_poisson(0.0, 1e4), DomainError);
  CHECK_THROWS_AS(delta_poisson(0.5, 0.0), DomainError);
}

TEST_CASE("Delta for Poisson offspring is continuous where nu = 1 only up to the branch factor") {
  // nu(h) = 1 near h = 0.1586; branch (i) gives h sqrt(mass), branch (ii) h nu³ sqrt(mass).
  double lo = 0.1;
  double hi = 0.2;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid - 1.0 - std::log(mid) >= 1.0 ? lo : hi) = mid;
  }
  CHECK(delta_poisson(lo, 1e4).case_label == "(i)");
  CHECK(delta_poisson(hi, 1e4).case_label == "(ii)");
  CHECK(delta_poisson(lo, 1e4).delta == doctest::Approx(delta_poisson(hi, 1e4).delta).epsilon(1e-6));
}

TEST_CASE("Delta for binomial offspring") {
  const auto a = delta_binomial(2, 0.25, 1e4);
  CHECK(std::abs(a.delta - 0.76147993) <= 1e-6);
  CHECK(a.case_label == "(ii)2");
  const auto b = delta_binomial(2, 0.1, 100.0);
  CHECK(b.delta == doctest::Approx(1.64306779).epsilon(1e-8));
  CHECK(b.case_label == "(ii)1");
  const auto c = delta_binomial(1, 0.3, 100.0);
  CHECK(c.delta == doctest::Approx(4.0816327).epsilon(1e-7));
  CHECK(c.case_label == "(i)1");
  const auto d = delta_binomial(1, 0.5, 100.0);
  CHECK(d.delta == doctest::Approx(2.1984295).epsilon(1e-7));
  CHECK(d.case_label == "(i)2");
  CHECK_THROWS_AS(delta_binomial(2, 0.6, 100.0), SupercriticalError);
  CHECK_THROWS_AS(delta_binomial(0, 0.5, 100.0), DomainError);
  CHECK_THROWS_AS(delta_binomial(2, 0.0, 100.0), DomainError);
}

TEST_CASE("Delta scales with the square root of the observed mass") {
  for (double h : {0.1, 0.5, 0.9}) {
    CHECK(delta_poisson(h, 4e4).delta == doctest::Approx(2.0 * delta_poisson(h, 1e4).delta));
  }
  CHECK(delta_binomial(3, 0.2, 9e2).delta == doctest::Approx(3.0 * delta_binomial(3, 0.2, 1e2).delta));
}

TEST_CASE("Bernstein-type concentration bound") {
  CHECK(bci_bound(0.0, 100.0, 10.0).value == doctest::Approx(7.453306e-6).epsilon(1e-6));
  CHECK(bci_bound(1.0, 4.0, 8.0).value == doctest::Approx(0.48623347).epsilon(1e-8));
  const auto zero = bci_bound(0.3, 1.0, 0.0);
  CHECK(zero.value == 2.0);
  CHECK(zero.vacuous);
  CHECK_THROWS_AS(bci_bound(-0.1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bci_bound(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bci_bound(0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("concentration bound is monotone") {
  for (double gamma : {0.0, 0.5, 1.0}) {
    double prev = 2.0;
    for (double x = 0.0; x <= 20.0; x += 0.25) {
      const double v = bci_bound(gamma, 3.0, x).value;
      CHECK(v <= prev);
      CHECK(bci_bound(gamma, 6.0, x).value <= v);  // larger Delta, sharper bound
      prev = v;
    }
  }
}

TEST_CASE("cumulant condition holds for Borel clusters with the Poisson Delta") {
  for (int i = 1; i <= 9; ++i) {
    const double h = 0.1 * i;
    const auto progeny = progeny_moments(PoissonOffspring{h}, 12);
    const auto marks = abs_moments(ConstantMark{1.0}, 12);
    for (double mass : {1e2, 1e4, 1e6}) {
      const double delta = delta_poisson(h, mass).delta;
      const auto r = check_cumulant_condition(marks, progeny.moments, mass, 0.0, delta, 12);
      CHECK_MESSAGE(r.all_pass, "h = " << h << ", mass = " << mass);
      CHECK(r.per_m.size() == 10);
    }
  }
}

TEST_CASE("cumulant condition fails for an inflated Delta") {
  const auto progeny = progeny_moments(PoissonOffspring{0.5}, 12);
  const auto marks = abs_moments(ConstantMark{1.0}, 12);
  const double delta = 1e6 * delta_poisson(0.5, 1e4).delta;
  const auto r = check_cumulant_condition(marks, progeny.moments, 1e4, 0.0, delta, 12);
  CHECK_FALSE(r.all_pass);
  CHECK(r.first_fail == 3);
  CHECK_THROWS_AS(check_cumulant_condition(marks, progeny.moments, 1e4, 0.0, 1.0, 13),
                  InsufficientMoments);
}

TEST_CASE("inequality x (x - 1 - log x)^2 <= 8/9 on (0, 1)") {
  double worst = 0.0;
  const int n = 1'000'000;
  for (int i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) / (n + 1);
    const double v = x - 1.0 - std::log(x);
    worst = std::max(worst, x * v * v);
  }
  CHECK(worst <= 8.0 / 9.0);
}

TEST_CASE("NACC window and MDP rate") {
  const auto w = nacc_window(1.0, 8.0, 2.0);
  CHECK(w.lower == 0.0);
  CHECK(w.upper == doctest::Approx(2.0 * std::cbrt(8.0)));
  CHECK(nacc_window(0.0, 4.0, 1.0).upper == doctest::Approx(4.0));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(mdp_rate_inf(1.0, 2.0) == 0.5);
  CHECK(mdp_rate_inf(-3.0, -2.0) == 2.0);
  CHECK(mdp_rate_inf(-1.0, 1.0) == 0.0);
  CHECK(mdp_rate_inf(3.0, inf) == 4.5);
  CHECK(mdp_rate_inf(-inf, -2.0) == 2.0);
  CHECK(mdp_rate_inf(2.0, 2.0) == 2.0);
  CHECK_THROWS_AS(mdp_rate_inf(2.0, 1.0), EmptyInterval);
}

TEST_CASE("insurance tail") {
  const auto r = insurance_tail_report(1.0, 0.5, 1.0, 64.0, 2.0);
  CHECK(r.threshold == 64.0);
  CHECK(r.simplified);
  CHECK(std::abs(r.bound - 2.0 * std::exp(-1.0)) <= 1e-12);
  CHECK_FALSE(r.proven_regime);
  CHECK_THROWS_AS(insurance_tail_report(1.0, 0.5, 1.0, 64.0, 2.0, {true}), RegimeError);
  CHECK(insurance_tail_report(1.0, 0.1, 1.0, 64.0, 2.0, {true}).proven_regime);
  CHECK_FALSE(insurance_tail_report(1.0, 0.5, 1.0, 10.0, 2.0).simplified);
  CHECK_THROWS_AS(insurance_tail_report(1.0, 0.5, 1.0, 64.0, 1.0), DomainError);
  CHECK_THROWS_AS(insurance_tail_report(1.0, 1.0, 1.0, 64.0, 2.0), DomainError);
}

TEST_CASE("insurance bound is continuous at the threshold and decreasing in T") {
  for (double h : {0.05, 0.3, 0.5, 0.8}) {
    for (double k : {1.5, 2.0, 4.0}) {
      const double t0 = insurance_tail_report(2.0, h, 1.0, 1.0, k).threshold;
      const auto below = insurance_tail_report(2.0, h, 1.0, t0 * (1.0 - 1e-12), k);
      const auto at = insurance_tail_report(2.0, h, 1.0, t0, k);
      CHECK_FALSE(below.simplified);
      CHECK(at.simplified);
      CHECK(below.bound == doctest::Approx(at.bound).epsilon(1e-9));
      double prev = 2.0;
      for (double T = t0 / 16.0; T <= 16.0 * t0; T *= 1.5) {
        const double b = insurance_tail_report(2.0, h, 1.0, T, k).bound;
        CHECK(b <= prev);
        prev = b;
      }
    }
  }
}

TEST_CASE("total loss interval") {
  const auto four = total_loss_interval(1.0, 0.5, 1.0, 1e4, 4.0);
  CHECK(four.center == doctest::Approx(2e4));
  CHECK(four.half_width == doctest::Approx(1600.0));
  CHECK(four.prob_lower_bound == doctest::Approx(0.26424112).epsilon(1e-8));
  const auto ten = total_loss_interval(1.0, 0.5, 1.0, 1e4, 10.0);
  CHECK(ten.prob_lower_bound == doctest::Approx(0.99253121).epsilon(1e-8));
  CHECK(total_loss_interval(1.0, 0.5, 1.0, 1e4, 1.0).vacuous);
  CHECK_THROWS_AS(total_loss_interval(1.0, 0.5, 1.0, 1e4, -1.0), DomainError);
}
