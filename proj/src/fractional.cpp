#include "tailbound/fractional.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailbound/optimize.hpp"

namespace tailbound {

namespace {

constexpr int kGridPoints = 2000;
constexpr double kGridWidthSpans = 4.0;
constexpr double kRefineRelTol = 1e-10;

// u^s for u >= 0 with cheap paths for the common orders.
double power(double u, double s) {
  if (s == 1.0) return u;
  if (s == 2.0) return u * u;
  if (s == 3.0) return u * u * u;
  if (s == 2.5) return u * u * std::sqrt(u);
  return std::pow(u, s);
}

}  // namespace

double fractional_constant(double s) {
  if (!(s > 0.0)) throw std::domain_error("fractional_constant: s must be positive");
  return std::exp(s) * std::pow(s, -s) * gamma_plus_one(s);
}

double step_integral_moment(const StepSurvival& surv, double s, double t) {
  if (!(s > 0.0)) throw std::domain_error("step_integral_moment: s must be positive");
  const auto xs = surv.knots();
  const auto vs = surv.values();
  // B equals vs[i] on (xs[i-1], xs[i]] and 1 on (-inf, xs[0]].
  double total = 0.0;
  for (std::size_t i = xs.size(); i-- > 0;) {
    if (xs[i] <= t) break;
    const double right = power(xs[i] - t, s);
    const double left = (i > 0 && xs[i - 1] > t) ? power(xs[i - 1] - t, s) : 0.0;
    total += vs[i] * (right - left);
  }
  return total;
}

InfimumResult lhs_inf(const StepSurvival& surv, double s, double x) {
  if (!(s > 0.0)) throw std::domain_error("lhs_inf: s must be positive");
  const auto xs = surv.knots();
  if (x <= xs.front()) return {1.0, -std::numeric_limits<double>::infinity()};
  if (x > xs.back()) return {0.0, xs.back()};

  double span = xs.back() - xs.front();
  if (span <= 0.0) span = 1.0;
  const double lo = x - kGridWidthSpans * span;
  const double step = (x - lo) / kGridPoints;
  auto objective = [&](double t) { return step_integral_moment(surv, s, t) / power(x - t, s); };

  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kGridPoints; ++j) {
    const double v = objective(lo + j * step);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  const double t_best = lo + best * step;
  const double a = best > 0 ? t_best - step : t_best;
  const double b = best + 1 < kGridPoints ? t_best + step : t_best + 0.5 * step;
  const Minimum refined = golden_section_min(objective, a, b, kRefineRelTol);
  InfimumResult r{best_val, t_best};
  if (refined.value < best_val) r = {refined.value, refined.arg};
  // The objective tends to 1 as t -> -inf.
  if (r.value > 1.0) r = {1.0, -std::numeric_limits<double>::infinity()};
  return r;
}

double rhs_bound(const LogLinearHull& hull, double s, double x) { return fractional_constant(s) * hull(x); }

InfimumResult tangent_witness(const StepSurvival& surv, const LogLinearHull& hull, double s, double x) {
  const double slope = hull.left_slope(x);
  if (!(slope > 0.0)) throw std::domain_error("tangent_witness: x must lie where -log B° is increasing");
  const double t = x - s / slope;
  return {step_integral_moment(surv, s, t) * power(slope / s, s), t};
}

}  // namespace tailbound
