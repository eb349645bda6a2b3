// Closed-form tail bounds for martingales with bounded differences.
//
// The three main bounds dominate P{M_n >= x} by c * B°(x), where B° is the
// log-concave hull of the survival of an i.i.d. sum of centered two-point
// atoms and c is e^s s^-s Gamma(s+1) for s = 1, 2, 3. Hoeffding's exponential
// bounds, the Poisson / Gaussian coarsenings and a few classical envelopes
// live here too.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailbound/distributions.hpp"
#include "tailbound/hull.hpp"

namespace tailbound {

// --- constants ------------------------------------------------------------

double const_e();             // range condition
double const_e2_over_2();     // one-sided bound + variance
double const_2e3_over_9();    // symmetric
double const_e3_over_2();     // range condition, Poisson coarsening: e * e^2/2

// --- Hoeffding --------------------------------------------------------------

/// H(a; p) = ((1-p)/(1-a))^(1-a) (p/a)^a for p < a <= 1; 1 for a <= p; 0 for a > 1.
double hoeffding_H(double a, double p);

/// H^n(p + x/n; p) for differences in [-p, 1-p].
double hoeffding_range_bound(std::int64_t n, double p, double x);

/// H^n((s2 + x/n)/(1 + s2); s2/(1 + s2)) after rescaling to b = 1.
double hoeffding_variance_bound(std::int64_t n, double sigma2, double b, double x);

// --- martingale conditions --------------------------------------------------

enum class ConditionKind {
  one_sided_variance,  // X_k <= b, conditional variance <= sigma_k^2
  range,               // -p_k <= X_k <= 1 - p_k
  per_step,            // X_k <= b_k, conditional variance <= sigma_k^2
  symmetric,           // |X_k| <= b_k
};

std::string to_string(ConditionKind kind);

class MartingaleConditions {
 public:
  static MartingaleConditions one_sided_variance(double b, std::vector<double> sigma2s);
  static MartingaleConditions range(std::vector<double> ps);
  static MartingaleConditions per_step(std::vector<double> bs, std::vector<double> sigma2s);
  static MartingaleConditions symmetric(std::vector<double> bs);

  ConditionKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  /// Upper bounds b_k (1 - p_k under the range condition).
  std::span<const double> bs() const { return bs_; }
  /// Variance caps sigma_k^2 (p_k - p_k^2 under the range condition, b_k^2 when symmetric).
  std::span<const double> sigma2s() const { return sigma2s_; }
  /// p_k, range condition only.
  std::span<const double> ps() const { return ps_; }

  double mean_sigma2() const;
  double mean_p() const;
  /// a^2 = mean of a_k^2 with a_k = max{b_k, sigma_k}.
  double a2() const;
  /// The shared bound b when every b_k is equal.
  std::optional<double> common_b() const;

 private:
  MartingaleConditions(ConditionKind kind, std::vector<double> bs, std::vector<double> sigma2s,
                       std::vector<double> ps);

  ConditionKind kind_;
  std::size_t n_;
  std::vector<double> bs_;
  std::vector<double> sigma2s_;
  std::vector<double> ps_;
};

// --- hull bounds -------------------------------------------------------------

struct BoundResult {
  double value;       // constant * hull_value, may exceed 1
  double constant;
  double hull_value;  // B°(x), or the Poisson / Gaussian factor
  double clamped() const { return value < 1.0 ? value : 1.0; }
};

/// c * B°(x) for the i.i.d. sum of n copies of an atom. Builds the survival
/// and hull once; evaluation is O(log n).
class BernoulliSumBound {
 public:
  BernoulliSumBound(const TwoPointDist& atom, std::int64_t n, double constant);

  BoundResult operator()(double x) const;
  const TwoPointDist& atom() const { return atom_; }
  const StepSurvival& survival() const { return survival_; }
  const LogLinearHull& hull() const { return hull_; }
  double constant() const { return constant_; }

 private:
  TwoPointDist atom_;
  StepSurvival survival_;
  LogLinearHull hull_;
  double constant_;
};

/// One-sided bound with variances: e^2/2 * B° for S_n of eps(mean sigma^2, b).
BernoulliSumBound one_sided_hull_bound(const MartingaleConditions& cond);
/// Range condition: e * B° for S_n of eps(p - p^2, 1 - p), p the mean p_k.
BernoulliSumBound range_hull_bound(const MartingaleConditions& cond);
/// Symmetric / per-step: 2e^3/9 * B° for S_n of the symmetric atom +-a.
BernoulliSumBound symmetric_hull_bound(const MartingaleConditions& cond);

BoundResult one_sided_bound(const MartingaleConditions& cond, double x);
/// e^2/2 * P°{eta >= lambda + x/b}, lambda = sum sigma_k^2 / b^2.
BoundResult one_sided_poisson_bound(const MartingaleConditions& cond, double x);
BoundResult range_bound(const MartingaleConditions& cond, double x);
/// e^3/2 * P°{eta >= lambda + x/(1-p)}, lambda = p n / (1 - p).
BoundResult range_poisson_bound(const MartingaleConditions& cond, double x);
BoundResult symmetric_bound(const MartingaleConditions& cond, double x);
/// 2e^3/9 * (1 - Phi(x/a)).
BoundResult symmetric_gaussian_bound(const MartingaleConditions& cond, double x);

// --- exponential and fractional-moment bounds -----------------------------------

struct ThetaSpec {
  double sigma2;
  double b;
};

struct MgfBoundResult {
  double value;                       // inf_h exp(-hx) prod E exp(h theta_k)
  double argmin_h;                    // +inf when the infimum is the h -> inf limit
  std::optional<double> closed_form;  // H^n(...) when all b_k are equal
};

/// Numeric infimum of the moment generating bound for T_n = sum theta_k.
/// With a common b, checks it against the closed form: equal within 1e-8
/// relative when the specs are identical, never above it otherwise.
/// Throws std::runtime_error when that check fails.
MgfBoundResult mgf_bound(std::span<const ThetaSpec> specs, double x);

struct FractionalMomentResult {
  double infimum;  // inf_{t<x} E (T - t)_+^s / (x - t)^s
  double argmin_t;
  double hull_form;  // e^s s^-s Gamma(s+1) P°{T >= x}
};

/// s >= 2 required. Throws std::runtime_error if infimum > hull_form + 1e-9.
FractionalMomentResult fractional_moment_bound(const DiscreteDist& t_dist, double s, double x);

// --- exact n = 1 values and classical envelopes ----------------------------------

struct RangeCase {
  double a;
  double b;
};
struct VarianceCase {
  double sigma2;
  double b;
};

/// sup P{X >= x} over centered X in [a, b].
double exact_n1(const RangeCase& c, double x);
/// sup P{X >= x} over centered X <= b with E X^2 <= sigma2.
double exact_n1(const VarianceCase& c, double x);

/// exp{x - (x + lambda) log(1 + x/lambda)}, x >= 0.
double poisson_tail_rough(double lambda, double x);

/// (lambda+x)^-1/2 (1+x/lambda)^({lambda+x}-1) exp{x - (x+lambda) log(1+x/lambda)},
/// defined for x >= max{lambda - 1, 1}.
double poisson_tail_sharp(double lambda, double x);

/// phi(x)/x for x > 0.
double gaussian_tail_upper(double x);

// --- confidence limits -----------------------------------------------------------

struct ConfidenceResult {
  double upper_limit;
  double bound_at_limit;
};

/// Conservative level-(1 - delta) upper confidence limit for the mean of n
/// observations in [0, 1]. The lower-tail bound at mu applies the range-condition
/// bound to the reflected differences mu - Y_k, i.e. p_k = 1 - mu and
/// x = n (mu - mean); the result is the largest mu with bound >= delta
/// (bisection to 1e-9). Monotonicity in mu is checked along the way.
ConfidenceResult invert_for_confidence(std::int64_t n, double sample_mean, double delta);

/// The lower-tail bound used by invert_for_confidence.
double confidence_tail_bound(std::int64_t n, double sample_mean, double mu);

}  // namespace tailbound
