// Fractional-moment tail bound engine.
//
// For a step survival B and s > 0,
//
//   I_s(t) = int_t^inf s (z - t)^(s-1) B(z) dz = E (X - t)_+^s,
//
// and the tail bound compares inf_{t<x} (x - t)^(-s) I_s(t) with
// e^s s^(-s) Gamma(s+1) B°(x). Both sides are computed here exactly up to
// the 1-D infimum search.
#pragma once

#include "tailbound/distributions.hpp"
#include "tailbound/hull.hpp"

namespace tailbound {

/// e^s s^-s Gamma(s+1); e, e^2/2, 2e^3/9 at s = 1, 2, 3.
double fractional_constant(double s);

/// Exact I_s(t), summed over the constant pieces of B.
double step_integral_moment(const StepSurvival& surv, double s, double t);

struct InfimumResult {
  double value;
  double argmin;
};

/// inf_{t<x} (x-t)^-s I_s(t): 2000-point grid on [x - 4 span, x), then
/// golden-section refinement around the best grid bracket.
/// Returns 1 when x is at or left of the first knot (the infimum is the t -> -inf limit).
InfimumResult lhs_inf(const StepSurvival& surv, double s, double x);

/// e^s s^-s Gamma(s+1) B°(x).
double rhs_bound(const LogLinearHull& hull, double s, double x);

/// The objective at the tangent-line choice t = x - s/slope, with slope the
/// left derivative of -log B° at x. Returns {objective, t}.
InfimumResult tangent_witness(const StepSurvival& surv, const LogLinearHull& hull, double s, double x);

}  // namespace tailbound
