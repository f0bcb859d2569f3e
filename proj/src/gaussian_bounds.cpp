#include "chaos_bounds/gaussian_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/progeny.hpp"

namespace chaos_bounds {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and >= 0");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and > 0");
  }
}

GaussianBoundReport make_report(double dw, double dk, nlohmann::ordered_json inputs) {
  GaussianBoundReport r;
  r.dw_bound = dw;
  r.dk_bound = dk;
  r.vacuous = dk >= 1.0 || dw >= trivial_wasserstein_ceiling();
  r.inputs = std::move(inputs);
  return r;
}

void validate_region(const Region& region) {
  require_positive(region.lambda, "lambda");
  require_positive(region.leb, "Leb(B ∩ C)");
}

}  // namespace

double trivial_wasserstein_ceiling() { return 1.0 + std::sqrt(2.0 / std::numbers::pi); }

double kolmogorov_bound(double r3, double r4) {
  const double factor = 1.0 + 0.5 * std::max(4.0, std::pow(4.0 * r4 + 2.0, 0.25));
  return factor * r3 + std::sqrt(r4);
}

GaussianBoundReport first_chaos_bounds(double m3, double m4) {
  require_nonnegative(m3, "∫|f|³");
  require_nonnegative(m4, "∫f⁴");
  return make_report(m3, kolmogorov_bound(m3, m4), {{"m3", m3}, {"m4", m4}});
}

GaussianBoundReport shotnoise_bounds(const KernelMoments& km) {
  require_positive(km.i2, "i2");
  require_nonnegative(km.i3_abs, "i3_abs");
  require_nonnegative(km.i4, "i4");
  const double dw = km.i3_abs / std::pow(km.i2, 1.5);
  const double r4 = km.i4 / (km.i2 * km.i2);
  return make_report(dw, kolmogorov_bound(dw, r4),
                     {{"i2", km.i2}, {"i3_abs", km.i3_abs}, {"i4", km.i4}});
}

std::vector<std::pair<int, double>> standardized_kernel_moments(
    const std::vector<std::pair<int, double>>& raw) {
  const auto second = std::find_if(raw.begin(), raw.end(), [](const auto& e) { return e.first == 2; });
  if (second == raw.end()) throw DomainError("standardisation needs the m = 2 integral");
  const double i2 = second->second;
  require_positive(i2, "second-order kernel integral");
  std::vector<std::pair<int, double>> out;
  out.reserve(raw.size());
  for (const auto& [m, value] : raw) {
    if (m < 2) throw DomainError("kernel moment orders start at 2");
    out.emplace_back(m, m == 2 ? 1.0 : value / std::pow(i2, 0.5 * m));
  }
  return out;
}

double cluster_moment_bound(double leb, double ez_m, double em_abs_m) {
  return leb * ez_m * em_abs_m;
}

GaussianBoundReport compound_cluster_bounds(const Region& region, const MarkLaw& mark, double ez3,
                                            double ez4) {
  validate_region(region);
  validate(mark);
  require_positive(ez3, "E Z³");
  require_positive(ez4, "E Z⁴");
  const double em2 = abs_moment(mark, 2);
  const double em3 = abs_moment(mark, 3);
  const double em4 = abs_moment(mark, 4);
  require_positive(em2, "E M²");
  require_nonnegative(em3, "E|M|³");
  require_nonnegative(em4, "E M⁴");

  const double mass = region.mass();
  const double dw = em3 * ez3 / (std::pow(em2, 1.5) * std::sqrt(mass));
  const double q = em4 * ez4 / (mass * em2 * em2);
  auto report = make_report(dw, kolmogorov_bound(dw, q),
                            {{"lambda", region.lambda},
                             {"leb", region.leb},
                             {"mark", describe(mark)},
                             {"em2", em2},
                             {"em3_abs", em3},
                             {"em4", em4},
                             {"ez3", ez3},
                             {"ez4", ez4}});
  if (const auto* custom = std::get_if<CustomMark>(&mark);
      custom && !lyapunov_consistent(custom->abs_moments)) {
    report.warnings.push_back("custom mark moments violate Lyapunov monotonicity");
  }
  return report;
}

GaussianBoundReport hawkes_bounds(const Region& region, const OffspringLaw& offspring,
                                  const MarkLaw& mark) {
  const auto table = progeny_moments(offspring, 4);
  auto report = compound_cluster_bounds(region, mark, table[3], table[4]);
  report.inputs["offspring"] = describe(offspring);
  return report;
}

GaussianBoundReport hawkes_poisson_bounds(const Region& region, double h, const MarkLaw& mark) {
  if (!(h >= 0.0 && h < 1.0)) {
    if (h >= 1.0) throw SupercriticalError("poisson offspring mean must be < 1");
    throw DomainError("poisson offspring mean must satisfy 0 <= h < 1");
  }
  const OffspringLaw law = h == 0.0 ? no_offspring() : OffspringLaw{PoissonOffspring{h}};
  auto report = compound_cluster_bounds(region, mark, progeny_moment_closed(law, 3),
                                        progeny_moment_closed(law, 4));
  report.inputs["h"] = h;
  return report;
}

GaussianBoundReport hawkes_binomial_bounds(const Region& region, int h, double p,
                                           const MarkLaw& mark) {
  const OffspringLaw law = BinomialOffspring{h, p};
  auto report = compound_cluster_bounds(region, mark, progeny_moment_closed(law, 3),
                                        progeny_moment_closed(law, 4));
  report.inputs["h"] = h;
  report.inputs["p"] = p;
  return report;
}

double hertzian_integral(double R, double alpha, int m) {
  require_positive(R, "R");
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 1");
  if (m < 1) throw DomainError("m must be >= 1");
  const double am = alpha * m;
  if (am <= 2.0) throw DivergentIntegral("∫ max{R,|x|}^{-alpha m} dx diverges for alpha m <= 2");
  return std::numbers::pi * am / (am - 2.0) * std::pow(R, 2.0 - am);
}

GaussianBoundReport interference_bounds(double lambda, double power2, double power3,
                                        double power4, double i2, double i3, double i4) {
  require_positive(lambda, "lambda");
  require_positive(power2, "E Z₁²");
  require_positive(i2, "∫A²");
  require_nonnegative(power3, "E Z₁³");
  require_nonnegative(power4, "E Z₁⁴");
  require_nonnegative(i3, "∫A³");
  require_nonnegative(i4, "∫A⁴");
  const double dw =
      (power3 / std::pow(power2, 1.5)) * (i3 / std::pow(i2, 1.5)) / std::sqrt(lambda);
  const double q = (power4 / (power2 * power2)) * (i4 / (i2 * i2)) / lambda;
  return make_report(dw, kolmogorov_bound(dw, q),
                     {{"lambda", lambda},
                      {"power2", power2},
                      {"power3", power3},
                      {"power4", power4},
                      {"i2", i2},
                      {"i3", i3},
                      {"i4", i4}});
}

GaussianBoundReport hertzian_interference_bounds(double lambda, double R, double alpha,
                                                 const MarkLaw& power) {
  validate(power);
  auto report = interference_bounds(lambda, abs_moment(power, 2), abs_moment(power, 3),
                                    abs_moment(power, 4), hertzian_integral(R, alpha, 2),
                                    hertzian_integral(R, alpha, 3), hertzian_integral(R, alpha, 4));
  report.inputs["R"] = R;
  report.inputs["alpha"] = alpha;
  report.inputs["power_law"] = describe(power);
  return report;
}

}  // namespace chaos_bounds
