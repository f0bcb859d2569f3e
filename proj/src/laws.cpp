#include "chaos_bounds/laws.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "chaos_bounds/errors.hpp"
#include "format_util.hpp"

namespace chaos_bounds {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> parse_list(std::string_view body, std::string_view what) {
  std::vector<double> out;
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = body.find(',', pos);
    const auto token = body.substr(pos, comma == std::string_view::npos ? body.size() - pos
                                                                        : comma - pos);
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty()) {
      throw DomainError("cannot parse number '" + std::string(token) + "' in " +
                        std::string(what));
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::pair<std::string_view, std::vector<double>> split_family(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return {text, {}};
  return {text.substr(0, colon), parse_list(text.substr(colon + 1), text)};
}

void expect_arity(std::string_view text, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n) {
    throw DomainError("'" + std::string(text) + "' expects " + std::to_string(n) +
                      " parameter(s)");
  }
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += detail::format_double(values[i]);
  }
  return out;
}

}  // namespace

OffspringLaw no_offspring() { return FactorialMomentOffspring{{0.0}}; }

double offspring_mean(const OffspringLaw& law) {
  return std::visit(
      overloaded{
          [](const PoissonOffspring& l) { return l.mean; },
          [](const BinomialOffspring& l) { return l.trials * l.p; },
          [](const FactorialMomentOffspring& l) {
            return l.factorial_moments.empty() ? 0.0 : l.factorial_moments.front();
          },
      },
      law);
}

void validate(const OffspringLaw& law) {
  std::visit(overloaded{
                 [](const PoissonOffspring& l) {
                   if (!(l.mean > 0.0) || !std::isfinite(l.mean)) {
                     throw DomainError("poisson offspring mean must satisfy 0 < h < 1");
                   }
                 },
                 [](const BinomialOffspring& l) {
                   if (l.trials < 1) throw DomainError("binomial offspring needs h >= 1 trials");
                   if (!(l.p > 0.0 && l.p < 1.0)) {
                     throw DomainError("binomial offspring needs 0 < p < 1");
                   }
                 },
                 [](const FactorialMomentOffspring& l) {
                   if (l.factorial_moments.empty()) {
                     throw DomainError("factorial-moment offspring needs at least E P");
                   }
                   for (double v : l.factorial_moments) {
                     if (!(v >= 0.0) || !std::isfinite(v)) {
                       throw DomainError("factorial moments must be finite and >= 0");
                     }
                   }
                 },
             },
             law);
  const double mean = offspring_mean(law);
  if (mean > kMaxOffspringMean) {
    throw SupercriticalError("offspring mean " + detail::format_double(mean) +
                             " is not sub-critical (need E P < 1)");
  }
}

OffspringLaw parse_offspring(std::string_view text) {
  auto [family, params] = split_family(text);
  OffspringLaw law;
  if (family == "poisson") {
    expect_arity(text, params, 1);
    law = PoissonOffspring{params[0]};
  } else if (family == "binomial") {
    expect_arity(text, params, 2);
    if (params[0] != std::floor(params[0])) {
      throw DomainError("binomial trial count must be an integer");
    }
    law = BinomialOffspring{static_cast<int>(params[0]), params[1]};
  } else if (family == "factorial") {
    law = FactorialMomentOffspring{params};
  } else if (family == "none" || family == "zero") {
    law = no_offspring();
  } else {
    throw DomainError("unknown offspring family '" + std::string(family) + "'");
  }
  validate(law);
  return law;
}

std::string describe(const OffspringLaw& law) {
  return std::visit(
      overloaded{
          [](const PoissonOffspring& l) { return "poisson:" + detail::format_double(l.mean); },
          [](const BinomialOffspring& l) {
            return "binomial:" + std::to_string(l.trials) + "," + detail::format_double(l.p);
          },
          [](const FactorialMomentOffspring& l) -> std::string {
            if (offspring_mean(l) == 0.0) return "none";
            return "factorial:" + join(l.factorial_moments);
          },
      },
      law);
}

double abs_moment(const MarkLaw& mark, int m) {
  if (m < 1) throw DomainError("moment order must be >= 1");
  const double md = m;
  return std::visit(
      overloaded{
          [&](const ConstantMark& l) { return std::pow(std::abs(l.value), md); },
          [&](const UniformMark& l) { return std::pow(l.upper, md) / (md + 1.0); },
          [&](const ExponentialMark& l) { return std::tgamma(md + 1.0) * std::pow(l.mean, md); },
          [&](const GaussianMark& l) {
            // E|G|^m = 2^{m/2} Gamma((m+1)/2) / sqrt(pi)
            return std::pow(l.sigma, md) *
                   std::exp(0.5 * md * std::numbers::ln2 + std::lgamma(0.5 * (md + 1.0)) -
                            0.5 * std::log(std::numbers::pi));
          },
          [&](const CustomMark& l) {
            if (static_cast<std::size_t>(m) > l.abs_moments.size()) {
              throw InsufficientMoments("custom mark law lacks E|M|^" + std::to_string(m));
            }
            return l.abs_moments[m - 1];
          },
      },
      mark);
}

std::vector<double> abs_moments(const MarkLaw& mark, int m_max) {
  std::vector<double> out;
  out.reserve(m_max > 0 ? m_max : 0);
  for (int m = 1; m <= m_max; ++m) out.push_back(abs_moment(mark, m));
  return out;
}

double mark_mean(const MarkLaw& mark) {
  return std::visit(overloaded{
                        [](const ConstantMark& l) { return l.value; },
                        [](const UniformMark& l) { return 0.5 * l.upper; },
                        [](const ExponentialMark& l) { return l.mean; },
                        [](const GaussianMark&) { return 0.0; },
                        [](const CustomMark& l) {
                          if (l.abs_moments.empty()) {
                            throw InsufficientMoments("custom mark law lacks E|M|");
                          }
                          return l.abs_moments.front();
                        },
                    },
                    mark);
}

void validate(const MarkLaw& mark) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be > 0");
  };
  std::visit(overloaded{
                 [](const ConstantMark& l) {
                   if (!std::isfinite(l.value)) throw DomainError("constant mark must be finite");
                 },
                 [&](const UniformMark& l) { positive(l.upper, "uniform mark upper end D"); },
                 [&](const ExponentialMark& l) { positive(l.mean, "exponential mark mean"); },
                 [&](const GaussianMark& l) { positive(l.sigma, "gaussian mark sigma"); },
                 [](const CustomMark& l) {
                   if (l.abs_moments.empty()) throw DomainError("custom mark needs E|M|^m values");
                   for (double v : l.abs_moments) {
                     if (!(v >= 0.0) || !std::isfinite(v)) {
                       throw DomainError("custom absolute moments must be finite and >= 0");
                     }
                   }
                 },
             },
             mark);
}

bool lyapunov_consistent(std::span<const double> abs_moments) {
  double previous = 0.0;
  for (std::size_t i = 0; i < abs_moments.size(); ++i) {
    const double norm = std::pow(abs_moments[i], 1.0 / static_cast<double>(i + 1));
    if (norm < previous * (1.0 - 1e-12)) return false;
    previous = norm;
  }
  return true;
}

MarkLaw parse_mark(std::string_view text) {
  auto [family, params] = split_family(text);
  MarkLaw mark;
  if (family == "const" || family == "constant") {
    expect_arity(text, params, 1);
    mark = ConstantMark{params[0]};
  } else if (family == "uniform") {
    expect_arity(text, params, 1);
    mark = UniformMark{params[0]};
  } else if (family == "exp" || family == "exponential") {
    expect_arity(text, params, 1);
    mark = ExponentialMark{params[0]};
  } else if (family == "gauss" || family == "gaussian") {
    expect_arity(text, params, 1);
    mark = GaussianMark{params[0]};
  } else if (family == "custom") {
    mark = CustomMark{params};
  } else {
    throw DomainError("unknown mark family '" + std::string(family) + "'");
  }
  validate(mark);
  return mark;
}

std::string describe(const MarkLaw& mark) {
  return std::visit(
      overloaded{
          [](const ConstantMark& l) { return "const:" + detail::format_double(l.value); },
          [](const UniformMark& l) { return "uniform:" + detail::format_double(l.upper); },
          [](const ExponentialMark& l) { return "exp:" + detail::format_double(l.mean); },
          [](const GaussianMark& l) { return "gauss:" + detail::format_double(l.sigma); },
          [](const CustomMark& l) { return "custom:" + join(l.abs_moments); },
      },
      mark);
}

}  // namespace chaos_bounds
