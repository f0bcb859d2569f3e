#include "chaos_bounds/progeny.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chaos_bounds/errors.hpp"

namespace chaos_bounds {

namespace {

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int k) {
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

// (h)_i with (h)_i = 0 when i > h.
double falling_factorial(int h, int i) {
  if (i > h) return 0.0;
  double out = 1.0;
  for (int j = 0; j < i; ++j) out *= h - j;
  return out;
}

void check_order(int n) {
  if (n < 1) throw DomainError("moment order must be >= 1");
  if (n > kMaxProgenyOrder) {
    throw DomainError("moment order " + std::to_string(n) + " exceeds supported maximum " +
                      std::to_string(kMaxProgenyOrder));
  }
}

void compose(int remaining, int parts, std::vector<int>& prefix,
             const std::function<void(std::span<const int>)>& visit) {
  if (parts == 1) {
    prefix.push_back(remaining);
    visit(prefix);
    prefix.pop_back();
    return;
  }
  for (int first = 1; first <= remaining - parts + 1; ++first) {
    prefix.push_back(first);
    compose(remaining - first, parts - 1, prefix, visit);
    prefix.pop_back();
  }
}

// Sum over compositions (m_1..m_i) of k of prod a[m_j], a[m] = E Z^m / m!.
double composition_sum(int k, int i, const std::vector<double>& a) {
  double total = 0.0;
  for_each_composition(k, i, [&](std::span<const int> parts) {
    double term = 1.0;
    for (int m : parts) term *= a[m];
    total += term;
  });
  return total;
}

double log_pmf(const ProgenyLaw& law, long k) {
  if (const auto* b = std::get_if<BorelLaw>(&law)) {
    const double kd = static_cast<double>(k);
    return -b->h * kd + (kd - 1.0) * std::log(b->h * kd) - std::lgamma(kd + 1.0);
  }
  const auto& c = std::get<ConsulLaw>(law);
  const double kd = static_cast<double>(k);
  const double h = c.h;
  return std::lgamma(kd * h + 1.0) - std::lgamma(kd) - std::lgamma(kd * h - kd + 2.0) -
         std::log(kd) + (kd - 1.0) * std::log(c.p) + (kd * (h - 1.0) + 1.0) * std::log1p(-c.p);
}

// Limit of P(Z = k + 1) / P(Z = k); the ratio increases monotonically towards it.
double limiting_pmf_ratio(const ProgenyLaw& law) {
  if (const auto* b = std::get_if<BorelLaw>(&law)) return b->h * std::exp(1.0 - b->h);
  const auto& c = std::get<ConsulLaw>(law);
  if (c.h == 1) return c.p;
  const double h = c.h;
  return c.p * h * std::pow(h * (1.0 - c.p) / (h - 1.0), h - 1.0);
}

void validate(const ProgenyLaw& law) {
  if (const auto* b = std::get_if<BorelLaw>(&law)) {
    if (!(b->h > 0.0 && b->h < 1.0)) throw DomainError("Borel law needs 0 < h < 1");
    if (b->h > kMaxOffspringMean) throw SupercriticalError("Borel law needs h < 1");
    return;
  }
  const auto& c = std::get<ConsulLaw>(law);
  if (c.h < 1) throw DomainError("Consul law needs integer h >= 1");
  if (!(c.p > 0.0 && c.p < 1.0)) throw DomainError("Consul law needs 0 < p < 1");
  if (c.h * c.p > kMaxOffspringMean) throw SupercriticalError("Consul law needs h * p < 1");
}

}  // namespace

void for_each_composition(int k, int i, const std::function<void(std::span<const int>)>& visit) {
  if (k < 1 || i < 1 || i > k) return;
  std::vector<int> prefix;
  prefix.reserve(i);
  compose(k, i, prefix, visit);
}

std::vector<std::vector<int>> compositions(int k, int i) {
  std::vector<std::vector<int>> out;
  for_each_composition(k, i, [&](std::span<const int> parts) {
    out.emplace_back(parts.begin(), parts.end());
  });
  return out;
}

std::vector<double> factorial_moments(const OffspringLaw& law, int n_max) {
  validate(law);
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  std::vector<double> out(n_max, 0.0);
  if (const auto* l = std::get_if<PoissonOffspring>(&law)) {
    for (int i = 1; i <= n_max; ++i) out[i - 1] = std::pow(l->mean, i);
  } else if (const auto* l = std::get_if<BinomialOffspring>(&law)) {
    for (int i = 1; i <= n_max; ++i) out[i - 1] = falling_factorial(l->trials, i) * std::pow(l->p, i);
  } else {
    const auto& stored = std::get<FactorialMomentOffspring>(law).factorial_moments;
    // E P = 0 forces P = 0, so every higher factorial moment vanishes too.
    const bool barren = !stored.empty() && stored.front() == 0.0;
    if (static_cast<std::size_t>(n_max) > stored.size() && !barren) {
      throw InsufficientMoments("offspring law provides " + std::to_string(stored.size()) +
                                " factorial moments, order " + std::to_string(n_max) +
                                " requested");
    }
    std::copy_n(stored.begin(), std::min<std::size_t>(n_max, stored.size()), out.begin());
  }
  return out;
}

ProgenyMomentTable progeny_moments(const OffspringLaw& law, int n_max) {
  check_order(n_max);
  const std::vector<double> fm = factorial_moments(law, n_max);
  const double mean = fm[0];
  const double inv_survival = 1.0 / (1.0 - mean);

  // a[m] = E Z^m / m!; comp[k][i] = sum over compositions of k into i parts.
  std::vector<double> a(n_max + 1, 0.0);
  std::vector<std::vector<double>> comp(n_max + 1, std::vector<double>(n_max + 1, 0.0));
  ProgenyMomentTable table{n_max, std::vector<double>(n_max, 0.0)};

  for (int n = 1; n <= n_max; ++n) {
    double sum = 1.0;
    for (int k = 1; k < n; ++k) {
      double inner = 0.0;
      for (int i = 1; i <= k; ++i) inner += fm[i - 1] / factorial(i) * comp[k][i];
      sum += binomial(n, k) * factorial(k) * inner;
    }
    // Compositions of n into i >= 2 parts only involve orders below n.
    double top = 0.0;
    for (int i = 2; i <= n; ++i) {
      comp[n][i] = composition_sum(n, i, a);
      top += fm[i - 1] / factorial(i) * comp[n][i];
    }
    sum += factorial(n) * top;

    const double moment = sum * inv_survival;
    table.moments[n - 1] = moment;
    a[n] = moment / factorial(n);
    comp[n][1] = a[n];
  }
  return table;
}

double progeny_moment(const OffspringLaw& law, int n) {
  check_order(n);
  return progeny_moments(law, n)[n];
}

double progeny_moment_closed(const OffspringLaw& law, int n) {
  if (n < 1 || n > 4) throw DomainError("closed forms exist for orders 1..4 only");
  validate(law);

  if (const auto* l = std::get_if<PoissonOffspring>(&law)) {
    const double h = l->mean;
    const double s = 1.0 - h;
    switch (n) {
      case 1: return 1.0 / s;
      case 2: return 1.0 / (s * s * s);
      case 3: return (1.0 + 2.0 * h) / std::pow(s, 5);
      default:
        return (1.0 + 4.0 * h / s + 6.0 * h * h / (s * s) +
                (4.0 * h * h * h + 6.0 * h) / std::pow(s, 3) +
                (std::pow(h, 4) + 12.0 * h * h) / std::pow(s, 4) + 6.0 * std::pow(h, 3) / std::pow(s, 5) +
                (11.0 * h * h + 4.0 * h) / std::pow(s, 6)) /
               s;
    }
  }

  if (const auto* l = std::get_if<BinomialOffspring>(&law)) {
    const int h = l->trials;
    const double p = l->p;
    const double hp = h * p;
    const double s = 1.0 - hp;
    const double f2 = p * p * falling_factorial(h, 2);
    const double f3 = std::pow(p, 3) * falling_factorial(h, 3);
    const double f4 = std::pow(p, 4) * falling_factorial(h, 4);
    const double var = hp * (1.0 - p);
    const double ez2 = (1.0 - h * p * p) / std::pow(s, 3);
    const double ez3 = (1.0 + 3.0 * hp / s + 3.0 * f2 / (s * s) + (f3 + 3.0 * var) / std::pow(s, 3) +
                        3.0 * var * var / std::pow(s, 4)) /
                       s;
    switch (n) {
      case 1: return 1.0 / s;
      case 2: return ez2;
      case 3: return ez3;
      default:
        return (1.0 + 4.0 * hp / s + 6.0 * f2 / (s * s) + 4.0 * f3 / std::pow(s, 3) +
                f4 / std::pow(s, 4) +
                3.0 * (1.0 - h * p * p) / std::pow(s, 3) *
                    (2.0 * hp + 4.0 * f2 / s + f2 * (1.0 - h * p * p) / std::pow(s, 3) +
                     2.0 * f3 / (s * s)) +
                4.0 * ez3 * var / s) /
               s;
    }
  }

  // Generic law: expressions in E(P)_i and Var P.
  const std::vector<double> fm = factorial_moments(law, std::max(n, 1));
  const double ep = fm[0];
  const double s = 1.0 - ep;
  if (n == 1) return 1.0 / s;
  const double f2 = fm[1];
  const double var = f2 + ep - ep * ep;
  const double ez2 = (var + 1.0 - ep) / std::pow(s, 3);
  if (n == 2) return ez2;
  const double f3 = fm[2];
  const double ez3 = (1.0 + 3.0 * ep / s + 3.0 * f2 / (s * s) + (f3 + 3.0 * var) / std::pow(s, 3) +
                      3.0 * var * var / std::pow(s, 4)) /
                     s;
  if (n == 3) return ez3;
  const double f4 = fm[3];
  return (1.0 + 4.0 * ep / s + 6.0 * f2 / (s * s) + 4.0 * f3 / std::pow(s, 3) + f4 / std::pow(s, 4) +
          3.0 * ez2 * (2.0 * ep + 4.0 * f2 / s + f2 * ez2 + 2.0 * f3 / (s * s)) +
          4.0 * ez3 * var / s) /
         s;
}

double borel_pmf(double h, long k) {
  if (k < 1) throw DomainError("Borel pmf needs k >= 1");
  if (!(h > 0.0 && h < 1.0)) throw DomainError("Borel pmf needs 0 < h < 1");
  return std::exp(log_pmf(BorelLaw{h}, k));
}

double consul_pmf(int h, double p, long k) {
  if (k < 1) throw DomainError("Consul pmf needs k >= 1");
  validate(ProgenyLaw{ConsulLaw{h, p}});
  return std::exp(log_pmf(ConsulLaw{h, p}, k));
}

SeriesResult progeny_series_detail(const ProgenyLaw& law, int m, double rel_tol) {
  validate(law);
  if (m < 0) throw DomainError("series moment order must be >= 0");
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be > 0");
  const double limit = limiting_pmf_ratio(law);
  if (!(limit < 1.0)) throw NoConvergence("dominating pmf ratio is not below 1");

  constexpr long kMaxTerms = 100'000'000;
  SeriesResult out;
  for (long k = 1; k <= kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(m * std::log(kd) + log_pmf(law, k));
    out.value += term;
    out.terms = k;
    // Ratio of consecutive terms stays below (1 + 1/k)^m * limit from k on.
    const double rho = std::pow(1.0 + 1.0 / kd, m) * limit;
    if (rho < 1.0) {
      out.tail_bound = term * rho / (1.0 - rho);
      if (out.tail_bound <= rel_tol * out.value) return out;
    }
  }
  throw NoConvergence("series did not reach the requested tolerance");
}

double progeny_moment_series(const ProgenyLaw& law, int m, double rel_tol) {
  if (m == 0) {
    validate(law);
    return 1.0;
  }
  return progeny_series_detail(law, m, rel_tol).value;
}

CertifiedSum abel_plana_bound(double nu, int m) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("Abel-Plana bound needs nu > 0");
  if (m < 2) throw DomainError("Abel-Plana bound needs m >= 2");
  const double fact = factorial(m - 1);
  return CertifiedSum{
      std::pow(nu, -m) * fact,
      1.0 / (std::numbers::pi * (m - 1)) + 2.0 * fact / std::pow(std::numbers::pi, m),
  };
}

}  // namespace chaos_bounds
