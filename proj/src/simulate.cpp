#include "chaos_bounds/simulate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

#include "chaos_bounds/deviations.hpp"
#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/gaussian_bounds.hpp"
#include "chaos_bounds/progeny.hpp"
#include "format_util.hpp"

namespace chaos_bounds {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be > 0");
}

// Per-individual offspring draws. Factorial-moment laws are samplable only
// when they describe the zero law.
class OffspringSampler {
 public:
  explicit OffspringSampler(const OffspringLaw& law) {
    std::visit(overloaded{
                   [&](const PoissonOffspring& p) {
                     if (p.mean > 0.0) dist_ = std::poisson_distribution<int>(p.mean);
                   },
                   [&](const BinomialOffspring& b) {
                     dist_ = std::binomial_distribution<int>(b.trials, b.p);
                   },
                   [&](const FactorialMomentOffspring& f) {
                     if (offspring_mean(f) != 0.0) {
                       throw DomainError(
                           "only poisson, binomial and zero offspring laws can be sampled");
                     }
                   },
               },
               law);
  }

  bool barren() const { return std::holds_alternative<std::monostate>(dist_); }

  int operator()(Rng& rng) {
    return std::visit(overloaded{
                          [](std::monostate) { return 0; },
                          [&](auto& d) { return d(rng); },
                      },
                      dist_);
  }

 private:
  std::variant<std::monostate, std::poisson_distribution<int>, std::binomial_distribution<int>>
      dist_;
};

class MarkSampler {
 public:
  explicit MarkSampler(const MarkLaw& mark) {
    std::visit(overloaded{
                   [&](const ConstantMark& c) { constant_ = c.value; },
                   [&](const UniformMark& u) {
                     dist_ = std::uniform_real_distribution<double>(0.0, u.upper);
                   },
                   [&](const ExponentialMark& e) {
                     dist_ = std::exponential_distribution<double>(1.0 / e.mean);
                   },
                   [&](const GaussianMark& g) {
                     dist_ = std::normal_distribution<double>(0.0, g.sigma);
                   },
                   [&](const CustomMark&) {
                     throw UnknownFamily("custom mark laws are described by moments only and "
                                         "cannot be sampled");
                   },
               },
               mark);
  }

  /// Value of a degenerate law, if the law is degenerate.
  std::optional<double> constant() const { return constant_; }

  double operator()(Rng& rng) {
    if (constant_) return *constant_;
    return std::visit(overloaded{
                          [](std::monostate) { return 0.0; },
                          [&](auto& d) { return static_cast<double>(d(rng)); },
                      },
                      dist_);
  }

 private:
  std::optional<double> constant_;
  std::variant<std::monostate, std::uniform_real_distribution<double>,
               std::exponential_distribution<double>, std::normal_distribution<double>>
      dist_;
};

double far_field_scale(const InterferenceModel& model) {
  // λ E(power) 2π / (alpha - 2): far-field mean beyond rho is this times rho^{2-alpha}.
  return model.lambda * mark_mean(model.power) * 2.0 * std::numbers::pi / (model.alpha - 2.0);
}

double normal_quantile(double c) { return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * c); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Antiderivative of Φ vanishing at -∞.
double psi(double x) { return x * normal_cdf(x) + normal_pdf(x); }

std::vector<double> standardized_sorted(std::span<const double> samples, const Standardization& s) {
  if (samples.empty()) throw DomainError("empirical distance needs at least one sample");
  require_positive(s.sd, "standardization sd");
  std::vector<double> z(samples.begin(), samples.end());
  for (auto& v : z) v = (v - s.mean) / s.sd;
  std::sort(z.begin(), z.end());
  return z;
}

VerificationReport base_report(std::string kind, std::size_t n, std::size_t calibration_n,
                               std::uint64_t seed) {
  VerificationReport r;
  r.kind = std::move(kind);
  r.n = n;
  r.calibration_n = calibration_n;
  r.seed = seed;
  return r;
}

void finish(VerificationReport& r) {
  r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                       [](const VerificationCheck& c) { return !c.applicable || c.pass; });
}

}  // namespace

Rng replication_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  // Hash the triple down to one 64-bit seed; filling the whole engine state
  // through seed_seq would dominate the cost of short replications.
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return Rng((static_cast<std::uint64_t>(words[1]) << 32) | words[0]);
}

std::vector<double> replicate(std::size_t n, std::uint64_t seed, std::uint64_t stream,
                              unsigned workers, const std::function<double(Rng&)>& f) {
  std::vector<double> out(n);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        auto rng = replication_rng(seed, stream, i);
        out[i] = f(rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

void validate(const ClusterModel& model) {
  require_positive(model.lambda, "lambda");
  require_positive(model.T, "T");
  require_positive(model.delay.beta, "beta");
  if (model.progeny_cap < 1) throw DomainError("progeny cap must be >= 1");
  validate(model.offspring);
  validate(model.mark);
}

void validate(const InterferenceModel& model) {
  require_positive(model.lambda, "lambda");
  require_positive(model.R, "R");
  if (!(model.alpha > 2.0)) {
    throw DivergentModel("interference has infinite mean unless alpha > 2");
  }
  validate(model.power);
  const auto* constant = std::get_if<ConstantMark>(&model.power);
  if (std::holds_alternative<GaussianMark>(model.power) || (constant && constant->value < 0.0)) {
    throw DomainError("signal powers must be non-negative");
  }
  if (model.tail_eps) require_positive(*model.tail_eps, "tail_eps");
}

std::int64_t sample_progeny(const OffspringLaw& law, Rng& rng, std::int64_t cap) {
  validate(law);
  if (cap < 1) throw DomainError("progeny cap must be >= 1");
  // The children of a whole generation are a single Poisson / binomial draw.
  auto generation = std::visit(
      overloaded{
          [](const PoissonOffspring& p) -> std::function<std::int64_t(std::int64_t, Rng&)> {
            const double h = p.mean;
            return [h](std::int64_t size, Rng& r) {
              if (h == 0.0) return std::int64_t{0};
              return std::poisson_distribution<std::int64_t>(h * static_cast<double>(size))(r);
            };
          },
          [](const BinomialOffspring& b) -> std::function<std::int64_t(std::int64_t, Rng&)> {
            const int trials = b.trials;
            const double p = b.p;
            return [trials, p](std::int64_t size, Rng& r) {
              return std::binomial_distribution<std::int64_t>(size * trials, p)(r);
            };
          },
          [](const FactorialMomentOffspring& f) -> std::function<std::int64_t(std::int64_t, Rng&)> {
            if (offspring_mean(f) != 0.0) {
              throw DomainError("only poisson, binomial and zero offspring laws can be sampled");
            }
            return [](std::int64_t, Rng&) { return std::int64_t{0}; };
          },
      },
      law);

  std::int64_t total = 1;
  std::int64_t current = 1;
  while (current > 0) {
    current = generation(current, rng);
    total += current;
    if (total > cap) {
      throw CapExceeded("total progeny exceeded the cap of " + std::to_string(cap));
    }
  }
  return total;
}

double sample_mark(const MarkLaw& mark, Rng& rng) {
  MarkSampler sampler(mark);
  return sampler(rng);
}

double sample_cluster_window(const ClusterModel& model, Rng& rng) {
  validate(model);
  OffspringSampler offspring(model.offspring);
  MarkSampler mark(model.mark);
  const double T = model.T;
  const auto immigrants = std::poisson_distribution<std::int64_t>(model.lambda * T)(rng);

  if (offspring.barren()) {
    if (auto c = mark.constant()) return *c * static_cast<double>(immigrants);
    double v = 0.0;
    for (std::int64_t i = 0; i < immigrants; ++i) v += mark(rng);
    return v;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> delay(model.delay.beta);
  const auto constant_mark = mark.constant();
  thread_local std::vector<double> pending;

  std::int64_t in_window = 0;
  double v = 0.0;
  for (std::int64_t i = 0; i < immigrants; ++i) {
    pending.clear();
    pending.push_back(T * (1.0 - unit(rng)));  // uniform on (0, T]
    std::int64_t cluster_size = 1;
    while (!pending.empty()) {
      const double s = pending.back();
      pending.pop_back();
      ++in_window;
      if (!constant_mark) v += mark(rng);
      const int children = offspring(rng);
      cluster_size += children;
      if (cluster_size > model.progeny_cap) {
        throw CapExceeded("cluster size exceeded the cap of " + std::to_string(model.progeny_cap));
      }
      for (int c = 0; c < children; ++c) {
        // Delays are positive, so a child born after T has no descendants in (0, T].
        const double t = s + delay(rng);
        if (t <= T) pending.push_back(t);
      }
    }
  }
  return constant_mark ? *constant_mark * static_cast<double>(in_window) : v;
}

double interference_mean(const InterferenceModel& model) {
  validate(model);
  return model.lambda * mark_mean(model.power) * hertzian_integral(model.R, model.alpha, 1);
}

double default_tail_eps(const InterferenceModel& model) {
  const double mean = interference_mean(model);
  return mean > 0.0 ? 0.01 * mean : 1.0;
}

double truncation_radius(const InterferenceModel& model) {
  validate(model);
  const double eps = model.tail_eps.value_or(default_tail_eps(model));
  const double scale = far_field_scale(model);
  if (scale <= 0.0) return model.R;
  return std::max(model.R, std::pow(scale / eps, 1.0 / (model.alpha - 2.0)));
}

double sample_interference(const InterferenceModel& model, Rng& rng) {
  const double rho = truncation_radius(model);
  MarkSampler power(model.power);
  const double rho2 = rho * rho;
  const double R2 = model.R * model.R;
  const double half_alpha = 0.5 * model.alpha;
  const auto nodes =
      std::poisson_distribution<std::int64_t>(model.lambda * std::numbers::pi * rho2)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0;
  for (std::int64_t i = 0; i < nodes; ++i) {
    const double r2 = rho2 * unit(rng);  // squared distance of a uniform point in the disc
    const double p = power(rng);
    sum += p * std::pow(std::max(R2, r2), -half_alpha);
  }
  return sum + far_field_scale(model) * std::pow(rho, 2.0 - model.alpha);
}

double sample_scenario(const Scenario& scenario, Rng& rng) {
  return std::visit(overloaded{
                        [&](const ClusterModel& m) { return sample_cluster_window(m, rng); },
                        [&](const InterferenceModel& m) { return sample_interference(m, rng); },
                    },
                    scenario);
}

Standardization standardization_of(std::span<const double> samples) {
  if (samples.size() < 2) throw DomainError("standardization needs at least two samples");
  long double sum = 0.0L;
  for (double v : samples) sum += v;
  const long double mean = sum / static_cast<long double>(samples.size());
  long double ss = 0.0L;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(samples.size() - 1)));
  if (!(sd > 0.0)) throw DomainError("calibration sample has zero standard deviation");
  return {static_cast<double>(mean), sd};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double empirical_kolmogorov(std::span<const double> samples, const Standardization& s) {
  const auto z = standardized_sorted(samples, s);
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double phi = normal_cdf(z[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - phi),
                  std::abs(static_cast<double>(i) / n - phi)});
  }
  return d;
}

double empirical_wasserstein(std::span<const double> samples, const Standardization& s) {
  const auto z = standardized_sorted(samples, s);
  const std::size_t n = z.size();
  // Tails: ∫_{-∞}^{z_1} Φ and ∫_{z_n}^{∞} (1 - Φ).
  double total = psi(z.front()) + psi(-z.back());
  for (std::size_t i = 1; i < n; ++i) {
    const double a = z[i - 1];
    const double b = z[i];
    if (b <= a) continue;
    const double c = static_cast<double>(i) / static_cast<double>(n);
    // ∫_u^v (Φ - c), whose sign is constant on either side of Φ^{-1}(c).
    auto piece = [c](double u, double v) { return psi(v) - psi(u) - c * (v - u); };
    const double cross = normal_quantile(c);
    if (cross > a && cross < b) {
      total += std::abs(piece(a, cross)) + std::abs(piece(cross, b));
    } else {
      total += std::abs(piece(a, b));
    }
  }
  return total;
}

double dkw_margin(std::size_t n, double delta) {
  if (n == 0) throw DomainError("DKW margin needs n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("DKW level must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

EmpiricalDistanceReport empirical_distances(std::span<const double> samples,
                                            const Standardization& s, double delta) {
  EmpiricalDistanceReport r;
  r.n = samples.size();
  r.dk_emp = empirical_kolmogorov(samples, s);
  r.dw_emp = empirical_wasserstein(samples, s);
  r.dkw_margin = dkw_margin(samples.size(), delta);
  r.standardization = s;
  return r;
}

VerificationSamples draw_verification_samples(const Scenario& scenario, std::size_t n_reps,
                                              std::uint64_t seed, unsigned workers) {
  if (n_reps < 1) throw DomainError("reps must be >= 1");
  std::visit([](const auto& m) { validate(m); }, scenario);
  // Construct samplers once up front so parameter errors surface before threading.
  auto draw = [&scenario](Rng& rng) { return sample_scenario(scenario, rng); };
  VerificationSamples out;
  out.main = replicate(n_reps, seed, static_cast<std::uint64_t>(Stream::main), workers, draw);
  out.calibration = replicate(10 * n_reps, seed, static_cast<std::uint64_t>(Stream::calibration),
                              workers, draw);
  return out;
}

nlohmann::ordered_json describe(const Scenario& scenario) {
  return std::visit(
      overloaded{
          [](const ClusterModel& m) {
            nlohmann::ordered_json j;
            const bool barren = offspring_mean(m.offspring) == 0.0;
            j["type"] = barren ? "compound-poisson" : "cluster";
            j["lambda"] = m.lambda;
            j["T"] = m.T;
            j["offspring"] = describe(m.offspring);
            j["beta"] = m.delay.beta;
            j["mark"] = describe(m.mark);
            j["progeny_cap"] = m.progeny_cap;
            return j;
          },
          [](const InterferenceModel& m) {
            nlohmann::ordered_json j;
            j["type"] = "interference";
            j["lambda"] = m.lambda;
            j["R"] = m.R;
            j["alpha"] = m.alpha;
            j["power"] = describe(m.power);
            j["tail_eps"] = m.tail_eps.value_or(default_tail_eps(m));
            j["truncation_radius"] = truncation_radius(m);
            return j;
          },
      },
      scenario);
}

VerificationReport verify_gaussian_bound(const Scenario& scenario, std::size_t n_reps,
                                         std::uint64_t seed, unsigned workers) {
  // Bounds first: a scenario without a computable bound fails before sampling.
  const GaussianBoundReport bound = std::visit(
      overloaded{
          [](const ClusterModel& m) {
            validate(m);
            return hawkes_bounds(Region{m.lambda, m.T}, m.offspring, m.mark);
          },
          [](const InterferenceModel& m) {
            validate(m);
            return hertzian_interference_bounds(m.lambda, m.R, m.alpha, m.power);
          },
      },
      scenario);

  const auto samples = draw_verification_samples(scenario, n_reps, seed, workers);
  const auto standard = standardization_of(samples.calibration);
  const auto dist = empirical_distances(samples.main, standard);

  auto r = base_report("gauss", n_reps, samples.calibration.size(), seed);
  r.standardization = standard;
  r.scenario = describe(scenario);
  r.bounds = {{"dw_bound", bound.dw_bound}, {"dk_bound", bound.dk_bound}, {"vacuous", bound.vacuous}};
  r.checks.push_back({"kolmogorov", dist.dk_emp, bound.dk_bound, dist.dkw_margin, true,
                      dist.dk_emp <= bound.dk_bound + dist.dkw_margin});
  r.checks.push_back({"wasserstein", dist.dw_emp, bound.dw_bound, kWassersteinSlack, true,
                      dist.dw_emp <= bound.dw_bound + kWassersteinSlack});
  finish(r);
  return r;
}

VerificationReport evaluate_bci(const VerificationSamples& samples, double gamma, double delta,
                                std::span<const double> x_grid, std::uint64_t seed) {
  if (x_grid.empty()) throw DomainError("x grid must not be empty");
  const auto standard = standardization_of(samples.calibration);
  const std::size_t n = samples.main.size();
  const double margin = dkw_margin(n);

  std::vector<double> abs_w(samples.main.begin(), samples.main.end());
  for (auto& v : abs_w) v = std::abs((v - standard.mean) / standard.sd);
  std::sort(abs_w.begin(), abs_w.end());

  auto r = base_report("bci", n, samples.calibration.size(), seed);
  r.standardization = standard;
  r.bounds = {{"gamma", gamma}, {"delta", delta}};
  for (double x : x_grid) {
    const double bound = bci_bound(gamma, delta, x).value;
    const auto exceed = abs_w.end() - std::lower_bound(abs_w.begin(), abs_w.end(), x);
    const double empirical = static_cast<double>(exceed) / static_cast<double>(n);
    VerificationCheck c;
    c.name = "tail@" + detail::format_double(x);
    c.empirical = empirical;
    c.reference = bound;
    c.margin = margin;
    c.applicable = bound + margin < 1.0;
    c.pass = empirical <= bound + margin;
    r.checks.push_back(std::move(c));
  }
  finish(r);
  return r;
}

VerificationReport verify_bci(const ClusterModel& model, double gamma, double delta,
                              std::span<const double> x_grid, std::size_t n_reps,
                              std::uint64_t seed, unsigned workers) {
  validate(model);
  bci_bound(gamma, delta, 0.0);  // parameter validation before sampling
  for (double x : x_grid) bci_bound(gamma, delta, x);
  const auto samples = draw_verification_samples(model, n_reps, seed, workers);
  auto r = evaluate_bci(samples, gamma, delta, x_grid, seed);
  r.scenario = describe(Scenario{model});
  return r;
}

VerificationReport verify_moments(const OffspringLaw& offspring, std::size_t n_draws,
                                  std::uint64_t seed, unsigned workers) {
  validate(offspring);
  if (n_draws < 1) throw DomainError("draws must be >= 1");
  OffspringSampler probe(offspring);  // rejects unsamplable laws up front
  const auto z = replicate(n_draws, seed, static_cast<std::uint64_t>(Stream::main), workers,
                           [&offspring](Rng& rng) {
                             return static_cast<double>(sample_progeny(offspring, rng));
                           });

  auto r = base_report("moments", n_draws, 0, seed);
  r.scenario = {{"offspring", describe(offspring)}};
  const double n = static_cast<double>(n_draws);
  for (int j = 1; j <= 3; ++j) {
    long double sum_j = 0.0L;
    long double sum_2j = 0.0L;
    for (double v : z) {
      const long double p = std::pow(static_cast<long double>(v), j);
      sum_j += p;
      sum_2j += p * p;
    }
    const double mean_j = static_cast<double>(sum_j / n);
    const double mean_2j = static_cast<double>(sum_2j / n);
    const double se = std::sqrt(std::max(0.0, mean_2j - mean_j * mean_j) / n);
    const double exact = progeny_moment(offspring, j);
    r.bounds["EZ" + std::to_string(j)] = exact;
    r.checks.push_back({"EZ" + std::to_string(j), mean_j, exact, 4.0 * se, true,
                        std::abs(mean_j - exact) <= 4.0 * se});
  }
  finish(r);
  return r;
}

void write_samples_csv(std::ostream& out, std::span<const double> samples) {
  out << "seed_index,value\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i << ',' << detail::format_double(samples[i]) << '\n';
  }
}

}  // namespace chaos_bounds
