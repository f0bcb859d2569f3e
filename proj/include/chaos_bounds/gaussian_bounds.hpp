#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chaos_bounds/laws.hpp"
#include "json.hpp"

namespace chaos_bounds {

/// Piecewise-constant intensity lambda on B, observed through C.
struct Region {
  double lambda = 0.0;  // intensity level
  double leb = 0.0;     // Leb(B ∩ C)

  double mass() const { return lambda * leb; }
};

/// ∫λ E H², ∫λ E|H|³ and ∫λ E H⁴ of a shot-noise kernel.
struct KernelMoments {
  double i2 = 0.0;
  double i3_abs = 0.0;
  double i4 = 0.0;
};

/// Upper bounds on the Wasserstein and Kolmogorov distances to N(0, 1).
struct GaussianBoundReport {
  double dw_bound = 0.0;
  double dk_bound = 0.0;
  /// True when dk_bound >= 1 or dw_bound exceeds the trivial ceiling
  /// 1 + sqrt(2/pi) valid for any standardised variable.
  bool vacuous = false;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
};

/// Trivial ceiling on d_W(X, G) for standardised X: E|X| + E|G|.
double trivial_wasserstein_ceiling();

/// Kolmogorov bound from a third-moment ratio and a fourth-moment ratio:
/// (1 + max{4, (4 r4 + 2)^{1/4}} / 2) r3 + sqrt(r4).
double kolmogorov_bound(double r3, double r4);

/// Bounds for a first chaos with a normalised kernel (∫f² = 1).
GaussianBoundReport first_chaos_bounds(double m3, double m4);

GaussianBoundReport shotnoise_bounds(const KernelMoments& km);

/// (m, raw_m) -> (m, raw_m / i2^{m/2}); requires the m = 2 entry.
std::vector<std::pair<int, double>> standardized_kernel_moments(
    const std::vector<std::pair<int, double>>& raw);

/// Leb(B ∩ C) E Z^m E|M|^m, an upper bound on ∫_B E|υ(Z₁)(C − x)|^m dx.
double cluster_moment_bound(double leb, double ez_m, double em_abs_m);

GaussianBoundReport compound_cluster_bounds(const Region& region, const MarkLaw& mark, double ez3,
                                            double ez4);

/// Compound cluster bounds for an arbitrary offspring law, moments from the
/// progeny recursion.
GaussianBoundReport hawkes_bounds(const Region& region, const OffspringLaw& offspring,
                                  const MarkLaw& mark);

/// Poisson(h) offspring; h = 0 is accepted and means no offspring.
GaussianBoundReport hawkes_poisson_bounds(const Region& region, double h, const MarkLaw& mark);
GaussianBoundReport hawkes_binomial_bounds(const Region& region, int h, double p,
                                           const MarkLaw& mark);

/// ∫_{R²} max{R, ‖x‖}^{-alpha m} dx = π alpha m / (alpha m − 2) R^{2 − alpha m}.
double hertzian_integral(double R, double alpha, int m);

GaussianBoundReport interference_bounds(double lambda, double power2, double power3,
                                        double power4, double i2, double i3, double i4);

/// Interference bounds for Hertzian attenuation over the whole plane.
GaussianBoundReport hertzian_interference_bounds(double lambda, double R, double alpha,
                                                 const MarkLaw& power);

}  // namespace chaos_bounds
