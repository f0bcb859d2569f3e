#include "chaos_bounds/deviations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chaos_bounds/errors.hpp"

namespace chaos_bounds {

namespace {

// Slack for comparisons that are exact in real arithmetic (constant marks).
constexpr double kLogSlack = 1e-12;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be > 0");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || std::isnan(v)) throw DomainError(std::string(name) + " must be >= 0");
}

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

void check_insurance_inputs(double lambda, double h, double mu, double T, InsuranceOptions options,
                            bool& proven_regime) {
  require_positive(lambda, "lambda");
  require_positive(mu, "mu");
  require_positive(T, "T");
  if (!(h > 0.0 && h < 1.0)) throw DomainError("insurance model needs 0 < h < 1");
  proven_regime = h - 1.0 - std::log(h) >= 1.0;
  if (!proven_regime && options.strict_regime) {
    throw RegimeError(
        "h - 1 - log h < 1: the insurance bounds are proven only for h - 1 - log h >= 1; "
        "use bci_bound with delta_poisson instead");
  }
}

}  // namespace

double mark_gamma(const MarkLaw& mark) {
  if (std::holds_alternative<ConstantMark>(mark)) return 0.0;
  if (std::holds_alternative<UniformMark>(mark)) return 1.0;
  if (std::holds_alternative<ExponentialMark>(mark)) return 1.0;
  if (std::holds_alternative<GaussianMark>(mark)) return 0.5;
  throw UnknownFamily("no tabulated gamma for custom marks; use verify_mark_gamma");
}

MarkGammaCheck verify_mark_gamma(std::span<const double> abs_moments, double gamma, int m_max) {
  require_nonnegative(gamma, "gamma");
  if (m_max < 3) throw DomainError("m_max must be >= 3");
  if (abs_moments.size() < 2) throw InsufficientMoments("E M² is required");
  if (static_cast<std::size_t>(m_max) > abs_moments.size()) {
    throw InsufficientMoments("absolute moments available only up to order " +
                              std::to_string(abs_moments.size()));
  }
  const double em2 = abs_moments[1];
  require_positive(em2, "E M²");
  MarkGammaCheck out;
  for (int m = 3; m <= m_max; ++m) {
    const double log_ratio = std::log(abs_moments[m - 1]) - 0.5 * m * std::log(em2);
    if (log_ratio > gamma * log_factorial(m) + kLogSlack) {
      out.holds = false;
      out.first_fail = m;
      break;
    }
  }
  return out;
}

DeltaResult delta_poisson(double h, double lambda_leb) {
  if (!(h > 0.0 && h < 1.0)) {
    if (h >= 1.0) throw SupercriticalError("poisson offspring mean must be < 1");
    throw DomainError("poisson offspring mean must satisfy 0 < h < 1");
  }
  require_positive(lambda_leb, "lambda * Leb(B ∩ C)");
  const double nu = h - 1.0 - std::log(h);
  const double root = std::sqrt(lambda_leb);
  if (nu >= 1.0) return {h * root, "(i)", nu};
  return {h * nu * nu * nu * root, "(ii)", nu};
}

DeltaResult delta_binomial(int h, double p, double lambda_leb) {
  if (h < 1) throw DomainError("binomial offspring needs h >= 1 trials");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("binomial offspring needs 0 < p < 1");
  if (h * p >= 1.0) throw SupercriticalError("binomial offspring needs h * p < 1");
  require_positive(lambda_leb, "lambda * Leb(B ∩ C)");
  const double root = std::sqrt(lambda_leb);

  if (h == 1) {
    const double nu = -std::log(p);
    const double base = p / (1.05 * (1.0 - p));
    if (p <= std::exp(-1.0)) return {base * root, "(i)1", nu};
    return {base * std::pow(std::log(p), 4) * root, "(i)2", nu};
  }

  const double hd = h;
  const double q = p * hd * std::pow(hd * (1.0 - p) / (hd - 1.0), hd - 1.0);
  const double nu = -std::log(q);
  const double u = 1.0 + std::sqrt(1.0 + 1.0 / (hd - 1.0)) * std::exp(1.0 / (24.0 * 25.0)) *
                             (1.0 - p) / (p * (hd - 1.0) * std::sqrt(2.0 * std::numbers::pi));
  if (q <= std::exp(-1.0)) return {root / u, "(ii)1", nu};
  return {nu * nu * nu / (1.16 * u) * root, "(ii)2", nu};
}

ProbabilityBound bci_bound(double gamma, double delta, double x) {
  require_nonnegative(gamma, "gamma");
  require_positive(delta, "delta");
  require_nonnegative(x, "x");
  const double gaussian_part = x * x / std::pow(2.0, 1.0 + gamma);
  const double linear_part = std::pow(x * delta, 1.0 / (1.0 + gamma));
  const double value = 2.0 * std::exp(-0.25 * std::min(gaussian_part, linear_part));
  return {value, value >= 1.0};
}

CumulantConditionReport check_cumulant_condition(std::span<const double> mark_abs_moments,
                                                 std::span<const double> progeny_moments,
                                                 double lambda_leb, double gamma, double delta,
                                                 int m_max) {
  if (m_max < 3) throw DomainError("m_max must be >= 3");
  require_positive(lambda_leb, "lambda * Leb(B ∩ C)");
  require_nonnegative(gamma, "gamma");
  require_positive(delta, "delta");
  const auto need = static_cast<std::size_t>(m_max);
  if (mark_abs_moments.size() < need) {
    throw InsufficientMoments("mark moments available only up to order " +
                              std::to_string(mark_abs_moments.size()));
  }
  if (progeny_moments.size() < need) {
    throw InsufficientMoments("progeny moments available only up to order " +
                              std::to_string(progeny_moments.size()));
  }
  const double em2 = mark_abs_moments[1];
  require_positive(em2, "E M²");

  CumulantConditionReport report;
  report.m_max = m_max;
  const double log_mass = std::log(lambda_leb);
  const double log_delta = std::log(delta);
  for (int m = 3; m <= m_max; ++m) {
    CumulantTerm t;
    t.m = m;
    t.log_lhs = std::log(mark_abs_moments[m - 1]) + std::log(progeny_moments[m - 1]) -
                0.5 * m * std::log(em2) - 0.5 * (m - 2) * log_mass;
    t.log_rhs = (1.0 + gamma) * log_factorial(m) - (m - 2) * log_delta;
    t.lhs = std::exp(t.log_lhs);
    t.rhs = std::exp(t.log_rhs);
    t.pass = t.log_lhs <= t.log_rhs + kLogSlack;
    if (!t.pass && !report.first_fail) report.first_fail = m;
    report.all_pass = report.all_pass && t.pass;
    report.per_m.push_back(t);
  }
  return report;
}

Interval nacc_window(double gamma, double delta, double c0) {
  require_nonnegative(gamma, "gamma");
  require_positive(delta, "delta");
  require_positive(c0, "c0");
  return {0.0, c0 * std::pow(delta, 1.0 / (1.0 + 2.0 * gamma))};
}

double mdp_rate_inf(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("interval endpoints must not be NaN");
  if (a > b) throw EmptyInterval("interval [a, b] is empty (a > b)");
  if (a <= 0.0 && b >= 0.0) return 0.0;
  const double nearest = a > 0.0 ? a : b;
  return 0.5 * nearest * nearest;
}

InsuranceTailReport insurance_tail_report(double lambda, double h, double mu, double T, double k,
                                          InsuranceOptions options) {
  if (!(k > 1.0) || !std::isfinite(k)) throw DomainError("excess factor k must be > 1");
  InsuranceTailReport r;
  check_insurance_inputs(lambda, h, mu, T, options, r.proven_regime);

  const double excess = k - 1.0;
  // 2^{11/2} h / ((k-1)^3 lambda (1-h)^{3/2}), arranged so h = 1/2 is exact.
  r.threshold =
      32.0 * h * std::sqrt(2.0 / (1.0 - h)) / (excess * excess * excess * lambda * (1.0 - h));
  const double gaussian_part = excess * excess * lambda * (1.0 - h) * T / 8.0;
  const double linear_part = std::sqrt(excess * lambda * h * std::sqrt(0.5 * (1.0 - h)) * T);
  r.simplified = T >= r.threshold;
  const double exponent = r.simplified ? linear_part : std::min(gaussian_part, linear_part);
  r.bound = 2.0 * std::exp(-0.25 * exponent);
  r.vacuous = r.bound >= 1.0;
  return r;
}

TotalLossInterval total_loss_interval(double lambda, double h, double mu, double T, double x,
                                      InsuranceOptions options) {
  require_nonnegative(x, "x");
  if (!std::isfinite(x)) throw DomainError("x must be finite");
  TotalLossInterval r;
  check_insurance_inputs(lambda, h, mu, T, options, r.proven_regime);
  const double s = 1.0 - h;
  r.center = lambda * mu * T / s;
  r.half_width = x * std::sqrt(2.0 * mu * mu * lambda * T / (s * s * s));
  const double exponent = std::min(0.25 * x * x, std::sqrt(x * h * std::sqrt(lambda * T)));
  r.prob_lower_bound = 1.0 - 2.0 * std::exp(-0.25 * exponent);
  r.vacuous = r.prob_lower_bound <= 0.0;
  return r;
}

}  // namespace chaos_bounds
