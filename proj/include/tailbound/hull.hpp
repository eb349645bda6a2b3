// Log-concave hull B° and linear envelope B◇ of a discrete survival function.
//
// B° is the smallest function above B whose negative logarithm is convex.
// For a step survival it is exp(-g) where g is the lower convex hull of the
// points (x_i, -log B(x_i)); it equals 1 left of the first knot and 0 strictly
// right of the last one.
#pragma once

#include <span>
#include <vector>

#include "tailbound/distributions.hpp"

namespace tailbound {

class LogLinearHull {
 public:
  LogLinearHull(std::vector<double> knots, std::vector<double> neg_log, std::vector<std::size_t> source_index,
                std::vector<double> values);

  std::size_t size() const { return knots_.size(); }
  std::span<const double> knots() const { return knots_; }
  /// -log B° at the hull knots: starts at 0, nondecreasing, convex.
  std::span<const double> neg_log() const { return neg_log_; }
  /// B at the hull knots, bit-identical to the source survival.
  std::span<const double> values() const { return values_; }
  /// Index of each hull knot in the source StepSurvival.
  std::span<const std::size_t> source_index() const { return source_index_; }

  /// B°(x).
  double operator()(double x) const;
  /// -log B°(x); +inf strictly right of the last knot.
  double neg_log_at(double x) const;
  /// Slope of -log B° on the segment ending at x (the left derivative);
  /// 0 at or left of the first knot.
  double left_slope(double x) const;

 private:
  std::vector<double> knots_;
  std::vector<double> neg_log_;
  std::vector<std::size_t> source_index_;
  std::vector<double> values_;
};

/// Lower convex hull of (x_i, -log B(x_i)) by one monotone-chain sweep.
/// Collinear knots (within 1e-12 on -log B) stay on the hull.
LogLinearHull log_concave_hull(const StepSurvival& s);

/// B°(x), same as h(x).
double eval_hull(const LogLinearHull& h, double x);

/// B◇(x): linear interpolation of B between adjacent knots.
double linear_envelope_eval(const StepSurvival& s, double x);

/// Every knot lies on the lower convex hull of (x_i, -log B(x_i)), with
/// slack 1e-12 * max(1, |log B|).
bool is_log_concave_discrete(const StepSurvival& s);

/// B°(y) for the Poisson(lambda) survival: log-linear interpolation between
/// the integers floor(y) and ceil(y); 1 for y <= 0.
double poisson_hull_eval(double lambda, double y);

}  // namespace tailbound
