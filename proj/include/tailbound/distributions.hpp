// Two-point atoms, finite discrete laws and step survival functions.
//
// Everything here is an immutable value type. Probabilities are kept in log
// space; survival values are computed from the smaller tail so that tails near
// 1e-15 (where the bounds are interesting) keep their relative accuracy.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tailbound/special.hpp"

namespace tailbound {

class DiscreteDist;
class StepSurvival;

/// Centered law on two values {lo, hi} with P{hi} = p_hi.
class TwoPointDist {
 public:
  TwoPointDist(double v_lo, double v_hi, double p_hi);
  /// Both masses given explicitly (avoids the rounding in 1 - p_hi).
  TwoPointDist(double v_lo, double v_hi, double p_lo, double p_hi);

  double v_lo() const { return v_lo_; }
  double v_hi() const { return v_hi_; }
  double p_hi() const { return p_hi_; }
  double p_lo() const { return p_lo_; }
  double mean() const;
  double variance() const;
  DiscreteDist to_discrete() const;

 private:
  double v_lo_;
  double v_hi_;
  double p_lo_;
  double p_hi_;
};

/// The centered atom with variance sigma2 and upper value b:
/// values {-sigma2/b, b}, P{b} = sigma2 / (b^2 + sigma2).
TwoPointDist two_point_from_variance(double sigma2, double b);

/// The centered atom on {a, b}, a < 0 < b: P{b} = -a / (b - a).
TwoPointDist two_point_from_range(double a, double b);

/// Support-merge tolerance: |s - t| <= kMergeRelTol * max(1, |s|, |t|).
inline constexpr double kMergeRelTol = 1e-9;

/// Finite discrete law. Support is strictly increasing; log-probabilities are finite.
class DiscreteDist {
 public:
  /// Sorts, merges near-coincident points and drops zero masses.
  /// Throws std::invalid_argument unless masses are nonnegative and sum to 1 within 1e-12.
  static DiscreteDist from_probabilities(std::span<const double> points, std::span<const double> probs);
  static DiscreteDist from_log_probabilities(std::span<const double> points, std::span<const double> logp);
  static DiscreteDist point_mass(double v);

  std::size_t size() const { return support_.size(); }
  std::span<const double> support() const { return support_; }
  std::span<const double> log_probs() const { return logp_; }
  double prob(std::size_t i) const;

  double mean() const;
  double second_moment() const;
  /// E f(X) over the finite support.
  double expect(const std::function<double(double)>& f) const;
  StepSurvival survival() const;

 private:
  DiscreteDist(std::vector<double> support, std::vector<double> logp);

  std::vector<double> support_;
  std::vector<double> logp_;
};

/// Law of the independent sum X + Y.
DiscreteDist convolve(const DiscreteDist& d1, const DiscreteDist& d2);

/// Survival function B(x) = P{X >= x} of a discrete law: left-continuous,
/// B = 1 at and below the first knot, B = 0 strictly beyond the last knot.
class StepSurvival {
 public:
  /// Knots strictly increasing, log_values[0] == 0, log_values non-increasing and finite.
  StepSurvival(std::vector<double> knots, std::vector<double> log_values);

  std::size_t size() const { return knots_.size(); }
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> log_values() const { return log_values_; }

  /// P{X >= x}.
  double operator()(double x) const;
  /// Mass at knot i, B(x_i) - B(x_{i+1}).
  double mass(std::size_t i) const;

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> log_values_;
};

/// Survival of the sum of n independent copies of d. Knots k*v_hi + (n-k)*v_lo;
/// values are binomial upper tails. Knots whose survival underflows are dropped.
StepSurvival iid_sum_survival(const TwoPointDist& d, std::int64_t n);

/// CSV dumps (header row included).
void write_csv(std::ostream& os, const DiscreteDist& d);
void write_csv(std::ostream& os, const StepSurvival& s);

/// printf("%.17g"): round-trips every double.
std::string format_double(double v);

}  // namespace tailbound
