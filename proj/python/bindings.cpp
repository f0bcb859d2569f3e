#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chaos_bounds/cli.hpp"
#include "chaos_bounds/deviations.hpp"
#include "chaos_bounds/errors.hpp"
#include "chaos_bounds/gaussian_bounds.hpp"
#include "chaos_bounds/json_io.hpp"
#include "chaos_bounds/progeny.hpp"
#include "chaos_bounds/simulate.hpp"

namespace py = pybind11;
namespace cb = chaos_bounds;

namespace {

// Reports cross the boundary as JSON text; the Python package decodes them.
template <class Report>
std::string dumped(const Report& r) {
  return cb::report_json(r).dump();
}

cb::ProgenyLaw progeny_law(double h, std::optional<double> p) {
  if (!p) return cb::BorelLaw{h};
  return cb::ConsulLaw{static_cast<int>(h), *p};
}

template <class F>
std::vector<double> replicate(std::size_t n, std::uint64_t seed, unsigned workers, F f) {
  py::gil_scoped_release release;
  return cb::replicate(n, seed, 0, workers, f);
}

template <class E>
void register_error(py::module_& m, const char* name, py::handle base) {
  py::register_exception<E>(m, name, base);
}

}  // namespace

PYBIND11_MODULE(_chaos_bounds, m) {
  m.doc() = "Gaussian approximation and concentration bounds for Poisson cluster functionals";

  auto error = py::register_exception<cb::Error>(m, "ChaosBoundsError", PyExc_ValueError);
  register_error<cb::DomainError>(m, "DomainError", error);
  register_error<cb::SupercriticalError>(m, "SupercriticalError", error);
  register_error<cb::InsufficientMoments>(m, "InsufficientMoments", error);
  register_error<cb::NoConvergence>(m, "NoConvergence", error);
  register_error<cb::DivergentIntegral>(m, "DivergentIntegral", error);
  register_error<cb::DivergentModel>(m, "DivergentModel", error);
  register_error<cb::CapExceeded>(m, "CapExceeded", error);
  register_error<cb::RegimeError>(m, "RegimeError", error);
  register_error<cb::UnknownFamily>(m, "UnknownFamily", error);
  register_error<cb::EmptyInterval>(m, "EmptyInterval", error);

  // progeny
  m.def("progeny_moments", [](const std::string& offspring, int n_max) {
    return cb::progeny_moments(cb::parse_offspring(offspring), n_max).moments;
  }, py::arg("offspring"), py::arg("n_max"));
  m.def("progeny_moment_closed", [](const std::string& offspring, int n) {
    return cb::progeny_moment_closed(cb::parse_offspring(offspring), n);
  }, py::arg("offspring"), py::arg("n"));
  m.def("factorial_moments", [](const std::string& offspring, int n_max) {
    return cb::factorial_moments(cb::parse_offspring(offspring), n_max);
  }, py::arg("offspring"), py::arg("n_max"));
  m.def("borel_pmf", &cb::borel_pmf, py::arg("h"), py::arg("k"));
  m.def("consul_pmf", &cb::consul_pmf, py::arg("h"), py::arg("p"), py::arg("k"));
  m.def("progeny_series", [](double h, std::optional<double> p, int m, double rel_tol) {
    return dumped(cb::progeny_series_detail(progeny_law(h, p), m, rel_tol));
  }, py::arg("h"), py::arg("p") = py::none(), py::arg("m") = 1, py::arg("rel_tol") = 1e-12);
  m.def("abel_plana_bound", [](double nu, int m) { return dumped(cb::abel_plana_bound(nu, m)); },
        py::arg("nu"), py::arg("m"));

  // gaussian bounds
  m.def("first_chaos_bounds", [](double m3, double m4) {
    return dumped(cb::first_chaos_bounds(m3, m4));
  }, py::arg("m3"), py::arg("m4"));
  m.def("shotnoise_bounds", [](double i2, double i3, double i4) {
    return dumped(cb::shotnoise_bounds({i2, i3, i4}));
  }, py::arg("i2"), py::arg("i3_abs"), py::arg("i4"));
  m.def("hawkes_bounds", [](double lambda, double leb, const std::string& offspring,
                            const std::string& mark) {
    return dumped(cb::hawkes_bounds({lambda, leb}, cb::parse_offspring(offspring),
                                    cb::parse_mark(mark)));
  }, py::arg("lambda_"), py::arg("leb"), py::arg("offspring"), py::arg("mark") = "const:1");
  m.def("hawkes_poisson_bounds", [](double lambda, double leb, double h, const std::string& mark) {
    return dumped(cb::hawkes_poisson_bounds({lambda, leb}, h, cb::parse_mark(mark)));
  }, py::arg("lambda_"), py::arg("leb"), py::arg("h"), py::arg("mark") = "const:1");
  m.def("hawkes_binomial_bounds", [](double lambda, double leb, int h, double p,
                                     const std::string& mark) {
    return dumped(cb::hawkes_binomial_bounds({lambda, leb}, h, p, cb::parse_mark(mark)));
  }, py::arg("lambda_"), py::arg("leb"), py::arg("h"), py::arg("p"), py::arg("mark") = "const:1");
  m.def("hertzian_integral", &cb::hertzian_integral, py::arg("R"), py::arg("alpha"), py::arg("m"));
  m.def("interference_bounds", [](double lambda, double R, double alpha, const std::string& power) {
    return dumped(cb::hertzian_interference_bounds(lambda, R, alpha, cb::parse_mark(power)));
  }, py::arg("lambda_"), py::arg("R"), py::arg("alpha"), py::arg("power") = "exp:1");

  // deviations
  m.def("delta_poisson", [](double h, double lambda_leb) {
    return dumped(cb::delta_poisson(h, lambda_leb));
  }, py::arg("h"), py::arg("lambda_leb"));
  m.def("delta_binomial", [](int h, double p, double lambda_leb) {
    return dumped(cb::delta_binomial(h, p, lambda_leb));
  }, py::arg("h"), py::arg("p"), py::arg("lambda_leb"));
  m.def("mark_gamma", [](const std::string& mark) { return cb::mark_gamma(cb::parse_mark(mark)); },
        py::arg("mark"));
  m.def("bci_bound", [](double gamma, double delta, double x) {
    return cb::bci_bound(gamma, delta, x).value;
  }, py::arg("gamma"), py::arg("delta"), py::arg("x"));
  m.def("check_cumulant_condition", [](const std::string& offspring, const std::string& mark,
                                       double lambda_leb, double gamma, double delta, int m_max) {
    const auto law = cb::parse_offspring(offspring);
    const auto marks = cb::abs_moments(cb::parse_mark(mark), m_max);
    return dumped(cb::check_cumulant_condition(marks, cb::progeny_moments(law, m_max).moments,
                                               lambda_leb, gamma, delta, m_max));
  }, py::arg("offspring"), py::arg("mark"), py::arg("lambda_leb"), py::arg("gamma"),
     py::arg("delta"), py::arg("m_max") = 12);
  m.def("insurance_tail_report", [](double lambda, double h, double mu, double T, double k,
                                    bool strict) {
    return dumped(cb::insurance_tail_report(lambda, h, mu, T, k, {strict}));
  }, py::arg("lambda_"), py::arg("h"), py::arg("mu"), py::arg("T"), py::arg("k"),
     py::arg("strict") = false);
  m.def("total_loss_interval", [](double lambda, double h, double mu, double T, double x,
                                  bool strict) {
    return dumped(cb::total_loss_interval(lambda, h, mu, T, x, {strict}));
  }, py::arg("lambda_"), py::arg("h"), py::arg("mu"), py::arg("T"), py::arg("x"),
     py::arg("strict") = false);

  // simulation
  m.def("empirical_kolmogorov", [](const std::vector<double>& s, double mean, double sd) {
    return cb::empirical_kolmogorov(s, {mean, sd});
  }, py::arg("samples"), py::arg("mean") = 0.0, py::arg("sd") = 1.0);
  m.def("empirical_wasserstein", [](const std::vector<double>& s, double mean, double sd) {
    return cb::empirical_wasserstein(s, {mean, sd});
  }, py::arg("samples"), py::arg("mean") = 0.0, py::arg("sd") = 1.0);
  m.def("dkw_margin", &cb::dkw_margin, py::arg("n"), py::arg("delta") = cb::kDkwDelta);
  m.def("sample_progeny", [](const std::string& offspring, std::size_t n, std::uint64_t seed,
                             unsigned workers) {
    const auto law = cb::parse_offspring(offspring);
    cb::validate(law);
    return replicate(n, seed, workers, [&law](cb::Rng& rng) {
      return static_cast<double>(cb::sample_progeny(law, rng));
    });
  }, py::arg("offspring"), py::arg("n"), py::arg("seed") = cb::kDefaultSeed,
     py::arg("workers") = 1);
  m.def("sample_cluster", [](double lambda, double T, const std::string& offspring,
                             const std::string& mark, double beta, std::size_t n,
                             std::uint64_t seed, unsigned workers) {
    cb::ClusterModel model{lambda, T, cb::parse_offspring(offspring), {beta}, cb::parse_mark(mark)};
    cb::validate(model);
    return replicate(n, seed, workers,
                     [&model](cb::Rng& rng) { return cb::sample_cluster_window(model, rng); });
  }, py::arg("lambda_"), py::arg("T"), py::arg("offspring") = "none", py::arg("mark") = "const:1",
     py::arg("beta") = 1.0, py::arg("n") = 1, py::arg("seed") = cb::kDefaultSeed,
     py::arg("workers") = 1);
  m.def("sample_interference", [](double lambda, double R, double alpha, const std::string& power,
                                  std::size_t n, std::uint64_t seed, unsigned workers) {
    cb::InterferenceModel model{lambda, R, alpha, cb::parse_mark(power), std::nullopt};
    cb::validate(model);
    return replicate(n, seed, workers,
                     [&model](cb::Rng& rng) { return cb::sample_interference(model, rng); });
  }, py::arg("lambda_"), py::arg("R"), py::arg("alpha"), py::arg("power") = "exp:1",
     py::arg("n") = 1, py::arg("seed") = cb::kDefaultSeed, py::arg("workers") = 1);
  m.def("verify_moments", [](const std::string& offspring, std::size_t n, std::uint64_t seed,
                             unsigned workers) {
    const auto law = cb::parse_offspring(offspring);
    py::gil_scoped_release release;
    return dumped(cb::verify_moments(law, n, seed, workers));
  }, py::arg("offspring"), py::arg("n"), py::arg("seed") = cb::kDefaultSeed,
     py::arg("workers") = 1);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cb::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
