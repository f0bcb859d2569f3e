#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaos_bounds/laws.hpp"

namespace chaos_bounds {

/// Concentration parameters (gamma, Delta) of the cumulant growth condition.
struct DeviationParams {
  double gamma = 0.0;
  double delta = 0.0;
  std::string case_label;
};

/// Delta from the Poisson or binomial offspring corollaries, with the branch
/// that produced it and the exponential rate nu it was derived from.
struct DeltaResult {
  double delta = 0.0;
  std::string case_label;
  double nu = 0.0;
};

/// Tail or probability bound that may be vacuous (> 1, or < 0 for a lower
/// bound on a probability). Never clamped.
struct ProbabilityBound {
  double value = 0.0;
  bool vacuous = false;
};

struct MarkGammaCheck {
  bool holds = true;
  std::optional<int> first_fail;
};

struct CumulantTerm {
  int m = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool pass = true;
};

struct CumulantConditionReport {
  int m_min = 3;
  int m_max = 3;
  std::vector<CumulantTerm> per_m;
  bool all_pass = true;
  std::optional<int> first_fail;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

struct InsuranceTailReport {
  double threshold = 0.0;  // T above which the single-term bound applies
  double bound = 0.0;
  bool simplified = false;
  bool vacuous = false;
  bool proven_regime = false;  // h - 1 - log h >= 1
};

struct TotalLossInterval {
  double center = 0.0;
  double half_width = 0.0;
  double prob_lower_bound = 0.0;
  bool vacuous = false;
  bool proven_regime = false;
};

/// gamma for which E|M|^m / (E M²)^{m/2} <= (m!)^gamma holds for every m >= 3.
/// Throws UnknownFamily for custom laws.
double mark_gamma(const MarkLaw& mark);

/// Checks E|M|^m / (E M²)^{m/2} <= (m!)^gamma for m = 3..m_max;
/// abs_moments[m - 1] = E|M|^m.
MarkGammaCheck verify_mark_gamma(std::span<const double> abs_moments, double gamma, int m_max);

DeltaResult delta_poisson(double h, double lambda_leb);
DeltaResult delta_binomial(int h, double p, double lambda_leb);

/// 2 exp(-min{x² / 2^{1+gamma}, (x Delta)^{1/(1+gamma)}} / 4).
ProbabilityBound bci_bound(double gamma, double delta, double x);

/// Per-order check of
///   E|M|^m E Z^m / ((E M²)^{m/2} sqrt(lambda_leb)^{m-2}) <= (m!)^{1+gamma} / Delta^{m-2}
/// for m = 3..m_max, evaluated in log space. Both moment lists are indexed
/// from order 1.
CumulantConditionReport check_cumulant_condition(std::span<const double> mark_abs_moments,
                                                 std::span<const double> progeny_moments,
                                                 double lambda_leb, double gamma, double delta,
                                                 int m_max);

/// [0, c0 Delta^{1/(1+2 gamma)}].
Interval nacc_window(double gamma, double delta, double c0);

/// inf of x²/2 over [a, b]; endpoints may be infinite.
double mdp_rate_inf(double a, double b);

struct InsuranceOptions {
  /// Raise RegimeError instead of flagging proven_regime = false.
  bool strict_regime = false;
};

/// Upper bound on P(V((0,T]) >= k lambda mu T / (1 - h)) for a Hawkes process
/// with Poisson(h) offspring and exponential claims of mean mu.
InsuranceTailReport insurance_tail_report(double lambda, double h, double mu, double T, double k,
                                          InsuranceOptions options = {});

/// Interval around E V((0,T]) of x standard deviations and a lower bound on
/// the probability that the total loss falls inside it.
TotalLossInterval total_loss_interval(double lambda, double h, double mu, double T, double x,
                                      InsuranceOptions options = {});

}  // namespace chaos_bounds
