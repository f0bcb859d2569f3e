#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "chaos_bounds/laws.hpp"

namespace chaos_bounds {

/// Highest progeny moment order supported by the composition recursion.
inline constexpr int kMaxProgenyOrder = 20;

/// E Z^n for n = 1..n_max, where Z is the total progeny (ancestor included).
struct ProgenyMomentTable {
  int n_max = 0;
  std::vector<double> moments;  // moments[n - 1] = E Z^n

  double operator[](int n) const { return moments.at(n - 1); }
};

/// Interval [center - radius, center + radius] known to contain a true value.
struct CertifiedSum {
  double center = 0.0;
  double radius = 0.0;

  double lower() const { return center - radius; }
  double upper() const { return center + radius; }
  bool contains(double value) const { return value >= lower() && value <= upper(); }
};

/// Factorial moments E(P)_i = E P(P-1)...(P-i+1), i = 1..n_max.
std::vector<double> factorial_moments(const OffspringLaw& law, int n_max);

/// E Z^n via the recursion that isolates E Z^n on the left-hand side; lower
/// orders are memoised within the call.
double progeny_moment(const OffspringLaw& law, int n);
ProgenyMomentTable progeny_moments(const OffspringLaw& law, int n_max);

/// Closed-form E Z^n for n <= 4. Poisson and binomial laws use their
/// dedicated expressions, generic laws the expressions in E(P)_i and Var P.
double progeny_moment_closed(const OffspringLaw& law, int n);

/// P(Z = k) for Poisson(h) offspring (Borel law).
double borel_pmf(double h, long k);
/// P(Z = k) for Binomial(h, p) offspring (Consul law).
double consul_pmf(int h, double p, long k);

struct BorelLaw {
  double h;
};
struct ConsulLaw {
  int h;
  double p;
};
using ProgenyLaw = std::variant<BorelLaw, ConsulLaw>;

struct SeriesResult {
  double value = 0.0;       // partial sum
  double tail_bound = 0.0;  // certified bound on the neglected tail
  long terms = 0;
};

/// sum_k k^m P(Z = k), truncated once a dominating geometric tail falls
/// below rel_tol times the partial sum. m = 0 returns exactly 1.
double progeny_moment_series(const ProgenyLaw& law, int m, double rel_tol);
/// Same summation, exposing the truncation certificate (also for m = 0).
SeriesResult progeny_series_detail(const ProgenyLaw& law, int m, double rel_tol);

/// Certified enclosure of sum_{k>=1} e^{-nu k} k^{m-1} around nu^{-m} (m-1)!.
CertifiedSum abel_plana_bound(double nu, int m);

/// Ordered i-tuples of positive integers summing to k, lexicographic.
std::vector<std::vector<int>> compositions(int k, int i);
void for_each_composition(int k, int i, const std::function<void(std::span<const int>)>& visit);

}  // namespace chaos_bounds
