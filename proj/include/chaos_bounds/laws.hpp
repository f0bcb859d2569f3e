#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chaos_bounds {

/// Largest offspring mean accepted anywhere in the library. (1 - E P) enters
/// progeny moments to the fifth and higher powers.
inline constexpr double kMaxOffspringMean = 1.0 - 1e-9;

// ---------------------------------------------------------------------------
// Offspring laws of the Galton-Watson cascade.

struct PoissonOffspring {
  double mean;  // h, 0 < h < 1
};

struct BinomialOffspring {
  int trials;  // h >= 1
  double p;    // 0 < p < 1, h * p < 1
};

/// Generic law described by its factorial moments E(P)_1 = E P, E(P)_2, ...
/// All-zero entries describe the degenerate "no offspring" law (Z == 1).
struct FactorialMomentOffspring {
  std::vector<double> factorial_moments;
};

using OffspringLaw =
    std::variant<PoissonOffspring, BinomialOffspring, FactorialMomentOffspring>;

/// The law with P == 0 almost surely.
OffspringLaw no_offspring();

double offspring_mean(const OffspringLaw& law);

/// Throws DomainError for malformed parameters and SupercriticalError when
/// E P exceeds kMaxOffspringMean.
void validate(const OffspringLaw& law);

/// Parses "poisson:h", "binomial:h,p", "factorial:e1,e2,..." or "none".
OffspringLaw parse_offspring(std::string_view text);
std::string describe(const OffspringLaw& law);

// ---------------------------------------------------------------------------
// Mark (and signal power) laws.

struct ConstantMark {
  double value;
};

struct UniformMark {
  double upper;  // uniform on [0, upper]
};

struct ExponentialMark {
  double mean;
};

struct GaussianMark {
  double sigma;  // centered
};

/// Absolute moments E|M|^m for m = 1..size().
struct CustomMark {
  std::vector<double> abs_moments;
};

using MarkLaw =
    std::variant<ConstantMark, UniformMark, ExponentialMark, GaussianMark, CustomMark>;

/// E|M|^m for m >= 1. Throws InsufficientMoments when a custom list is too
/// short.
double abs_moment(const MarkLaw& mark, int m);
std::vector<double> abs_moments(const MarkLaw& mark, int m_max);

/// Signed first moment E M. Custom laws are assumed non-negative.
double mark_mean(const MarkLaw& mark);

void validate(const MarkLaw& mark);

/// True when (E|M|^a)^(1/a) is non-decreasing in a over the given list.
bool lyapunov_consistent(std::span<const double> abs_moments);

/// Parses "const:c", "uniform:D", "exp:mean", "gauss:sigma" or
/// "custom:m1,m2,...".
MarkLaw parse_mark(std::string_view text);
std::string describe(const MarkLaw& mark);

}  // namespace chaos_bounds
