#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chaos_bounds/laws.hpp"
#include "json.hpp"

namespace chaos_bounds {

inline constexpr std::int64_t kDefaultProgenyCap = 10'000'000;
/// Confidence level of every DKW band used in pass/fail verdicts.
inline constexpr double kDkwDelta = 1e-3;
/// Slack added to the Wasserstein bound in Gaussian verifications.
inline constexpr double kWassersteinSlack = 0.05;

/// Independent random streams of a verification run.
enum class Stream : std::uint64_t { main = 0, calibration = 1 };

using Rng = std::mt19937_64;

/// Generator of replication `index` in `stream`; a pure function of its
/// arguments, so results never depend on scheduling.
Rng replication_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Runs f(rng) for index = 0..n-1 on `workers` threads (0 = hardware
/// concurrency) and returns the results in index order. If any replication
/// throws, the exception of the lowest failing index is rethrown.
std::vector<double> replicate(std::size_t n, std::uint64_t seed, std::uint64_t stream,
                              unsigned workers, const std::function<double(Rng&)>& f);

// ---------------------------------------------------------------------------
// Models

struct ExponentialDelay {
  double beta = 1.0;
};

/// Immigrants Poisson(lambda) on (0, T]; each individual at time s has
/// offspring at s + delay. V((0, T]) sums the marks of individuals in (0, T].
struct ClusterModel {
  double lambda = 1.0;
  double T = 1.0;
  OffspringLaw offspring = no_offspring();
  ExponentialDelay delay{};
  MarkLaw mark = ConstantMark{1.0};
  std::int64_t progeny_cap = kDefaultProgenyCap;
};

/// Poisson(lambda) transmitters on the plane, i.i.d. powers, attenuation
/// max{R, |x|}^{-alpha}; I({0}) is the interference at the origin.
struct InterferenceModel {
  double lambda = 1.0;
  double R = 1.0;
  double alpha = 4.0;
  MarkLaw power = ExponentialMark{1.0};
  /// Budget for the neglected far-field mean; unset means default_tail_eps.
  std::optional<double> tail_eps;
};

using Scenario = std::variant<ClusterModel, InterferenceModel>;

void validate(const ClusterModel& model);
void validate(const InterferenceModel& model);

// ---------------------------------------------------------------------------
// Samplers

/// Total progeny (ancestor included), generation by generation. Only Poisson,
/// binomial and zero offspring are samplable.
std::int64_t sample_progeny(const OffspringLaw& law, Rng& rng,
                            std::int64_t cap = kDefaultProgenyCap);

double sample_mark(const MarkLaw& mark, Rng& rng);

double sample_cluster_window(const ClusterModel& model, Rng& rng);

/// Campbell mean lambda E(power) ∫ max{R, |x|}^{-alpha} dx.
double interference_mean(const InterferenceModel& model);
/// One percent of the Campbell mean (1 when the mean vanishes).
double default_tail_eps(const InterferenceModel& model);
/// Smallest rho >= R whose far-field mean lambda E(power) 2π rho^{2-alpha}/(alpha-2)
/// does not exceed the budget.
double truncation_radius(const InterferenceModel& model);

/// Exact inside the truncation disc; the far field contributes its mean.
double sample_interference(const InterferenceModel& model, Rng& rng);

double sample_scenario(const Scenario& scenario, Rng& rng);

// ---------------------------------------------------------------------------
// Empirical distances to N(0, 1)

struct Standardization {
  double mean = 0.0;
  double sd = 1.0;
};

/// Sample mean and (n - 1)-normalised standard deviation.
Standardization standardization_of(std::span<const double> samples);

double normal_cdf(double x);

/// sup_x |F_n(x) - Φ(x)| of the standardised samples.
double empirical_kolmogorov(std::span<const double> samples, const Standardization& s = {});

/// ∫|F_n - Φ| of the standardised samples, integrated exactly piece by piece.
double empirical_wasserstein(std::span<const double> samples, const Standardization& s = {});

/// sqrt(ln(2/delta) / (2n)).
double dkw_margin(std::size_t n, double delta = kDkwDelta);

struct EmpiricalDistanceReport {
  std::size_t n = 0;
  double dk_emp = 0.0;
  double dw_emp = 0.0;
  double dkw_margin = 0.0;
  Standardization standardization;
};

EmpiricalDistanceReport empirical_distances(std::span<const double> samples,
                                            const Standardization& s, double delta = kDkwDelta);

// ---------------------------------------------------------------------------
// Verification harness

struct VerificationCheck {
  std::string name;
  double empirical = 0.0;
  double reference = 0.0;
  double margin = 0.0;
  bool applicable = true;
  bool pass = true;
};

struct VerificationReport {
  std::string kind;
  std::size_t n = 0;
  std::size_t calibration_n = 0;
  std::uint64_t seed = 0;
  std::optional<Standardization> standardization;
  nlohmann::ordered_json scenario = nlohmann::ordered_json::object();
  nlohmann::ordered_json bounds = nlohmann::ordered_json::object();
  std::vector<VerificationCheck> checks;
  bool pass = true;
};

/// Main sample (n reps) and independent calibration sample (10 n reps).
struct VerificationSamples {
  std::vector<double> main;
  std::vector<double> calibration;
};

VerificationSamples draw_verification_samples(const Scenario& scenario, std::size_t n_reps,
                                              std::uint64_t seed, unsigned workers = 0);

/// Compares empirical d_K, d_W of the calibrated main sample with the
/// theoretical bounds: pass iff d_K <= bound + DKW and d_W <= bound + 0.05.
VerificationReport verify_gaussian_bound(const Scenario& scenario, std::size_t n_reps,
                                         std::uint64_t seed, unsigned workers = 0);

/// Empirical P(|W| >= x) against bci_bound(gamma, delta, x) + DKW for every
/// x where that sum is below 1.
VerificationReport verify_bci(const ClusterModel& model, double gamma, double delta,
                              std::span<const double> x_grid, std::size_t n_reps,
                              std::uint64_t seed, unsigned workers = 0);

/// verify_bci on samples already drawn with draw_verification_samples.
VerificationReport evaluate_bci(const VerificationSamples& samples, double gamma, double delta,
                                std::span<const double> x_grid, std::uint64_t seed);

/// Empirical E Z^j, j = 1..3, against the exact progeny moments within four
/// standard errors.
VerificationReport verify_moments(const OffspringLaw& offspring, std::size_t n_draws,
                                  std::uint64_t seed, unsigned workers = 0);

nlohmann::ordered_json describe(const Scenario& scenario);

/// "seed_index,value" rows, one per replication.
void write_samples_csv(std::ostream& out, std::span<const double> samples);

}  // namespace chaos_bounds
