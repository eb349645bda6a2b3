#include "tailbound/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tailbound {

namespace {

// Largest lambda handled by direct summation of Poisson terms.
constexpr double kPoissonDirectMax = 30.0;
constexpr double kSeriesEps = 1e-17;
constexpr int kMaxIter = 100000;

// Sum of a sequence of positive terms in log space, smallest first.
double log_sum_reversed(std::vector<double>& logs) {
  double acc = kNegInf;
  for (auto it = logs.rbegin(); it != logs.rend(); ++it) acc = log_add_exp(acc, *it);
  return acc;
}

// log P(a, x) by the lower-gamma series, used when x < a + 1.
double log_gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (del < sum * kSeriesEps) break;
  }
  return std::log(sum) - x + a * std::log(x) - log_gamma(a);
}

// log Q(a, x) by the Lentz continued fraction, used when x >= a + 1.
double log_gamma_q_fraction(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::log(h) - x + a * std::log(x) - log_gamma(a);
}

double poisson_log_survival_direct(double lambda, std::int64_t k) {
  const double log_lambda = std::log(lambda);
  if (static_cast<double>(k) > lambda) {
    // Upper tail is the smaller one; terms decrease from j = k.
    std::vector<double> logs;
    double term = static_cast<double>(k) * log_lambda - lambda - log_gamma(static_cast<double>(k) + 1.0);
    const double head = term;
    for (std::int64_t j = k;; ++j) {
      logs.push_back(term);
      if (term < head + std::log(kSeriesEps) || logs.size() > static_cast<std::size_t>(kMaxIter)) break;
      term += log_lambda - std::log(static_cast<double>(j + 1));
    }
    return log_sum_reversed(logs);
  }
  // Lower tail P{eta < k}, terms increase with j up to k - 1 <= lambda.
  double lower = 0.0;
  double term = std::exp(-lambda);
  for (std::int64_t j = 0; j < k; ++j) {
    lower += term;
    term *= lambda / static_cast<double>(j + 1);
  }
  return std::log1p(-lower);
}

}  // namespace

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return kNegInf;
  const double m = *std::max_element(v.begin(), v.end());
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log1m_exp(double a) {
  if (a > 0.0) throw std::domain_error("log1m_exp: argument must be <= 0");
  // Maechler's switch point keeps full relative accuracy on both sides.
  if (a > -std::numbers::ln2) return std::log(-std::expm1(a));
  return std::log1p(-std::exp(a));
}

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gamma_plus_one(double s) {
  if (s >= 0.0 && s <= 20.0 && s == std::floor(s)) {
    double f = 1.0;
    for (int i = 2; i <= static_cast<int>(s); ++i) f *= i;
    return f;
  }
  return std::exp(log_gamma(s + 1.0));
}

double binomial_log_pmf(std::int64_t n, std::int64_t k, double p) {
  if (k < 0 || k > n) return kNegInf;
  if (p <= 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return k == n ? 0.0 : kNegInf;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0) + kd * std::log(p) +
         (nd - kd) * std::log1p(-p);
}

double binomial_log_survival(std::int64_t n, double p, std::int64_t k) {
  if (n < 0) throw std::domain_error("binomial_log_survival: n must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_log_survival: p outside [0, 1]");
  if (k <= 0) return 0.0;
  if (k > n) return kNegInf;
  const double mean = static_cast<double>(n) * p;
  std::vector<double> logs;
  if (static_cast<double>(k) > mean) {
    // Upper tail: terms decrease from k upwards.
    const double head = binomial_log_pmf(n, k, p);
    for (std::int64_t j = k; j <= n; ++j) {
      const double t = binomial_log_pmf(n, j, p);
      logs.push_back(t);
      if (t < head + std::log(kSeriesEps)) break;
    }
    return log_sum_reversed(logs);
  }
  // Lower tail: terms decrease from k - 1 downwards.
  const double head = binomial_log_pmf(n, k - 1, p);
  for (std::int64_t j = k - 1; j >= 0; --j) {
    const double t = binomial_log_pmf(n, j, p);
    logs.push_back(t);
    if (t < head + std::log(kSeriesEps)) break;
  }
  return log1m_exp(std::min(0.0, log_sum_reversed(logs)));
}

std::vector<double> log_survival_from_log_pmf(std::span<const double> logp) {
  const std::size_t m = logp.size();
  std::vector<double> upper(m + 1, kNegInf);
  std::vector<double> lower(m + 1, kNegInf);
  for (std::size_t i = m; i-- > 0;) upper[i] = log_add_exp(upper[i + 1], logp[i]);
  for (std::size_t i = 0; i < m; ++i) lower[i + 1] = log_add_exp(lower[i], logp[i]);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (lower[i] <= upper[i]) {
      out[i] = log1m_exp(std::min(0.0, lower[i]));
    } else {
      out[i] = std::min(0.0, upper[i]);
    }
  }
  return out;
}

double poisson_log_survival(double lambda, std::int64_t k) {
  if (!(lambda > 0.0)) throw std::domain_error("poisson_log_survival: lambda must be positive");
  if (k <= 0) return 0.0;
  if (lambda <= kPoissonDirectMax) return poisson_log_survival_direct(lambda, k);
  // P{eta >= k} is the regularized lower incomplete gamma P(k, lambda).
  const double a = static_cast<double>(k);
  if (lambda < a + 1.0) return log_gamma_p_series(a, lambda);
  return log1m_exp(std::min(0.0, log_gamma_q_fraction(a, lambda)));
}

double poisson_survival(double lambda, std::int64_t k) {
  return std::exp(poisson_log_survival(lambda, k));
}

double gaussian_survival(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

}  // namespace tailbound
