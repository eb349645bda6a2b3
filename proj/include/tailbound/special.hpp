// Special functions used throughout: log-space arithmetic, log-gamma,
// binomial / Poisson tails and the Gaussian survival function.
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace tailbound {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
double log_add_exp(double a, double b);

/// log(sum exp(v)); returns -inf for an empty span.
double log_sum_exp(std::span<const double> v);

/// log(1 - exp(a)) for a <= 0.
double log1m_exp(double a);

/// Thread-safe log|Gamma(x)| (does not touch the global signgam).
double log_gamma(double x);

/// Gamma(s + 1). Exact factorials for integer s in [0, 20], log-gamma otherwise.
double gamma_plus_one(double s);

/// log C(n, k) + k log p + (n - k) log(1 - p).
double binomial_log_pmf(std::int64_t n, std::int64_t k, double p);

/// log P{Bin(n, p) >= k}, summed from the smaller tail.
double binomial_log_survival(std::int64_t n, double p, std::int64_t k);

/// Survival values from a log-pmf sequence: out[i] = log sum_{j >= i} exp(logp[j]).
/// Each entry is taken from whichever of the upper / lower cumulative sums is
/// the smaller tail; out[0] is exactly 0 when the masses sum to one.
std::vector<double> log_survival_from_log_pmf(std::span<const double> logp);

/// log P{eta >= k} for eta ~ Poisson(lambda).
double poisson_log_survival(double lambda, std::int64_t k);

/// P{eta >= k} for eta ~ Poisson(lambda).
double poisson_survival(double lambda, std::int64_t k);

/// 1 - Phi(x) for the standard normal distribution.
double gaussian_survival(double x);

}  // namespace tailbound
