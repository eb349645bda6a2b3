#include "tailbound/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tailbound {

namespace {

constexpr double kHullSlack = 1e-12;

// Height of the middle point above the chord from o to b, in -log B units.
double excess_over_chord(double ox, double oy, double ax, double ay, double bx, double by) {
  const double w = (ax - ox) / (bx - ox);
  return ay - (oy + w * (by - oy));
}

}  // namespace

LogLinearHull::LogLinearHull(std::vector<double> knots, std::vector<double> neg_log,
                             std::vector<std::size_t> source_index, std::vector<double> values)
    : knots_(std::move(knots)),
      neg_log_(std::move(neg_log)),
      source_index_(std::move(source_index)),
      values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != neg_log_.size() || knots_.size() != values_.size() ||
      knots_.size() != source_index_.size())
    throw std::invalid_argument("LogLinearHull: inconsistent sizes");
}

double LogLinearHull::neg_log_at(double x) const {
  if (x <= knots_.front()) return 0.0;
  if (x > knots_.back()) return std::numeric_limits<double>::infinity();
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  const auto i = static_cast<std::size_t>(it - knots_.begin());
  if (knots_[i] == x) return neg_log_[i];
  const double w = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
  return (1.0 - w) * neg_log_[i - 1] + w * neg_log_[i];
}

double LogLinearHull::operator()(double x) const {
  if (x <= knots_.front()) return 1.0;
  if (x > knots_.back()) return 0.0;
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  const auto i = static_cast<std::size_t>(it - knots_.begin());
  if (knots_[i] == x) return values_[i];
  return std::exp(-neg_log_at(x));
}

double LogLinearHull::left_slope(double x) const {
  if (x <= knots_.front() || knots_.size() < 2) return 0.0;
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) --it;
  const auto i = static_cast<std::size_t>(it - knots_.begin());
  return (neg_log_[i] - neg_log_[i - 1]) / (knots_[i] - knots_[i - 1]);
}

LogLinearHull log_concave_hull(const StepSurvival& s) {
  const auto xs = s.knots();
  const auto lv = s.log_values();
  std::vector<std::size_t> chain;
  chain.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (chain.size() >= 2) {
      const std::size_t o = chain[chain.size() - 2];
      const std::size_t a = chain.back();
      if (excess_over_chord(xs[o], -lv[o], xs[a], -lv[a], xs[i], -lv[i]) > kHullSlack) {
        chain.pop_back();
      } else {
        break;
      }
    }
    chain.push_back(i);
  }
  std::vector<double> knots;
  std::vector<double> neg_log;
  std::vector<double> values;
  for (std::size_t i : chain) {
    knots.push_back(xs[i]);
    neg_log.push_back(-lv[i]);
    values.push_back(s.values()[i]);
  }
  return LogLinearHull(std::move(knots), std::move(neg_log), std::move(chain), std::move(values));
}

double eval_hull(const LogLinearHull& h, double x) { return h(x); }

double linear_envelope_eval(const StepSurvival& s, double x) {
  const auto xs = s.knots();
  const auto vs = s.values();
  if (x <= xs.front()) return 1.0;
  if (x > xs.back()) return 0.0;
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin());
  if (xs[i] == x) return vs[i];
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - w) * vs[i - 1] + w * vs[i];
}

bool is_log_concave_discrete(const StepSurvival& s) {
  const auto xs = s.knots();
  const auto lv = s.log_values();
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double excess = excess_over_chord(xs[i - 1], -lv[i - 1], xs[i], -lv[i], xs[i + 1], -lv[i + 1]);
    if (excess > kHullSlack * std::max(1.0, std::fabs(lv[i]))) return false;
  }
  return true;
}

double poisson_hull_eval(double lambda, double y) {
  if (!(lambda > 0.0)) throw std::domain_error("poisson_hull_eval: lambda must be positive");
  if (y <= 0.0) return 1.0;
  const double k = std::floor(y);
  const double frac = y - k;
  const auto ki = static_cast<std::int64_t>(k);
  if (frac == 0.0) return poisson_survival(lambda, ki);
  const double lo = poisson_log_survival(lambda, ki);
  const double hi = poisson_log_survival(lambda, ki + 1);
  return std::exp((1.0 - frac) * lo + frac * hi);
}

}  // namespace tailbound
