#include "tailbound/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace tailbound {

namespace {

constexpr double kMeanTol = 1e-14;
constexpr double kMassTol = 1e-12;

bool within_merge_tol(double s, double t) {
  return std::fabs(s - t) <= kMergeRelTol * std::max({1.0, std::fabs(s), std::fabs(t)});
}

}  // namespace

TwoPointDist::TwoPointDist(double v_lo, double v_hi, double p_hi) : TwoPointDist(v_lo, v_hi, 1.0 - p_hi, p_hi) {}

TwoPointDist::TwoPointDist(double v_lo, double v_hi, double p_lo, double p_hi)
    : v_lo_(v_lo), v_hi_(v_hi), p_lo_(p_lo), p_hi_(p_hi) {
  if (!(v_lo < v_hi)) throw std::invalid_argument("TwoPointDist: need v_lo < v_hi");
  if (!(p_hi > 0.0 && p_hi < 1.0 && p_lo > 0.0 && p_lo < 1.0))
    throw std::invalid_argument("TwoPointDist: masses must lie in (0, 1)");
  if (std::fabs(p_lo + p_hi - 1.0) > kMassTol) throw std::invalid_argument("TwoPointDist: masses must sum to 1");
  const double scale = std::max({1.0, std::fabs(v_lo), std::fabs(v_hi)});
  if (std::fabs(mean()) > kMeanTol * scale) throw std::invalid_argument("TwoPointDist: atom is not centered");
}

double TwoPointDist::mean() const { return v_lo_ * p_lo_ + v_hi_ * p_hi_; }

double TwoPointDist::variance() const { return v_lo_ * v_lo_ * p_lo_ + v_hi_ * v_hi_ * p_hi_; }

DiscreteDist TwoPointDist::to_discrete() const {
  const double pts[] = {v_lo_, v_hi_};
  const double lp[] = {std::log(p_lo_), std::log(p_hi_)};
  return DiscreteDist::from_log_probabilities(pts, lp);
}

TwoPointDist two_point_from_variance(double sigma2, double b) {
  if (!(sigma2 > 0.0) || !(b > 0.0)) throw std::domain_error("two_point_from_variance: need sigma2 > 0 and b > 0");
  const double denom = b * b + sigma2;
  return TwoPointDist(-sigma2 / b, b, b * b / denom, sigma2 / denom);
}

TwoPointDist two_point_from_range(double a, double b) {
  if (!(a < 0.0) || !(b > 0.0)) throw std::domain_error("two_point_from_range: need a < 0 < b");
  const double width = b - a;
  return TwoPointDist(a, b, b / width, -a / width);
}

// --- DiscreteDist ---------------------------------------------------------

DiscreteDist::DiscreteDist(std::vector<double> support, std::vector<double> logp)
    : support_(std::move(support)), logp_(std::move(logp)) {}

DiscreteDist DiscreteDist::from_log_probabilities(std::span<const double> points, std::span<const double> logp) {
  if (points.size() != logp.size() || points.empty())
    throw std::invalid_argument("DiscreteDist: support and probabilities must be non-empty and of equal length");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });

  std::vector<double> support;
  std::vector<double> lp;
  for (std::size_t idx : order) {
    const double x = points[idx];
    const double l = logp[idx];
    if (!std::isfinite(x)) throw std::invalid_argument("DiscreteDist: support points must be finite");
    if (std::isnan(l) || l > 1e-12) throw std::invalid_argument("DiscreteDist: invalid log-probability");
    if (l == kNegInf) continue;
    if (!support.empty() && within_merge_tol(support.back(), x)) {
      lp.back() = log_add_exp(lp.back(), l);
    } else {
      support.push_back(x);
      lp.push_back(l);
    }
  }
  if (support.empty()) throw std::invalid_argument("DiscreteDist: no positive mass");
  if (std::fabs(std::expm1(log_sum_exp(lp))) > kMassTol)
    throw std::invalid_argument("DiscreteDist: probabilities must sum to 1");
  return DiscreteDist(std::move(support), std::move(lp));
}

DiscreteDist DiscreteDist::from_probabilities(std::span<const double> points, std::span<const double> probs) {
  std::vector<double> lp(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0)) throw std::invalid_argument("DiscreteDist: negative probability");
    lp[i] = probs[i] > 0.0 ? std::log(probs[i]) : kNegInf;
  }
  return from_log_probabilities(points, lp);
}

DiscreteDist DiscreteDist::point_mass(double v) { return DiscreteDist({v}, {0.0}); }

double DiscreteDist::prob(std::size_t i) const { return std::exp(logp_.at(i)); }

double DiscreteDist::mean() const {
  return expect([](double x) { return x; });
}

double DiscreteDist::second_moment() const {
  return expect([](double x) { return x * x; });
}

double DiscreteDist::expect(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) s += std::exp(logp_[i]) * f(support_[i]);
  return s;
}

StepSurvival DiscreteDist::survival() const {
  return StepSurvival(support_, log_survival_from_log_pmf(logp_));
}

DiscreteDist convolve(const DiscreteDist& d1, const DiscreteDist& d2) {
  std::vector<double> pts;
  std::vector<double> lp;
  pts.reserve(d1.size() * d2.size());
  lp.reserve(d1.size() * d2.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    for (std::size_t j = 0; j < d2.size(); ++j) {
      pts.push_back(d1.support()[i] + d2.support()[j]);
      lp.push_back(d1.log_probs()[i] + d2.log_probs()[j]);
    }
  }
  return DiscreteDist::from_log_probabilities(pts, lp);
}

// --- StepSurvival ---------------------------------------------------------

StepSurvival::StepSurvival(std::vector<double> knots, std::vector<double> log_values)
    : knots_(std::move(knots)), log_values_(std::move(log_values)) {
  if (knots_.empty() || knots_.size() != log_values_.size())
    throw std::invalid_argument("StepSurvival: knots and values must be non-empty and of equal length");
  if (log_values_[0] != 0.0) throw std::invalid_argument("StepSurvival: survival at the first knot must be 1");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(log_values_[i]))
      throw std::invalid_argument("StepSurvival: knots and log-values must be finite");
    if (i > 0 && !(knots_[i] > knots_[i - 1])) throw std::invalid_argument("StepSurvival: knots must increase");
    if (i > 0 && log_values_[i] > log_values_[i - 1])
      throw std::invalid_argument("StepSurvival: survival must be non-increasing");
  }
  values_.resize(log_values_.size());
  std::transform(log_values_.begin(), log_values_.end(), values_.begin(), [](double l) { return std::exp(l); });
}

double StepSurvival::operator()(double x) const {
  // First knot >= x carries P{X >= x}.
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - knots_.begin())];
}

double StepSurvival::mass(std::size_t i) const {
  const double next = i + 1 < values_.size() ? values_[i + 1] : 0.0;
  return values_.at(i) - next;
}

StepSurvival iid_sum_survival(const TwoPointDist& d, std::int64_t n) {
  if (n < 1) throw std::domain_error("iid_sum_survival: n must be positive");
  const auto count = static_cast<std::size_t>(n) + 1;
  const double log_hi = std::log(d.p_hi());
  const double log_lo = std::log(d.p_lo());
  const double log_n_fact = log_gamma(static_cast<double>(n) + 1.0);
  std::vector<double> logp(count);
  std::vector<double> knots(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double kd = static_cast<double>(k);
    const double rest = static_cast<double>(n) - kd;
    logp[k] = log_n_fact - log_gamma(kd + 1.0) - log_gamma(rest + 1.0) + kd * log_hi + rest * log_lo;
    knots[k] = kd * d.v_hi() + rest * d.v_lo();
  }
  auto log_surv = log_survival_from_log_pmf(logp);
  log_surv[0] = 0.0;
  // Keep knots whose survival is representable.
  std::size_t keep = count;
  while (keep > 1 && std::exp(log_surv[keep - 1]) == 0.0) --keep;
  knots.resize(keep);
  log_surv.resize(keep);
  return StepSurvival(std::move(knots), std::move(log_surv));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const DiscreteDist& d) {
  os << "point,log_prob\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    os << format_double(d.support()[i]) << ',' << format_double(d.log_probs()[i]) << '\n';
}

void write_csv(std::ostream& os, const StepSurvival& s) {
  os << "point,survival\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << format_double(s.knots()[i]) << ',' << format_double(s.values()[i]) << '\n';
}

}  // namespace tailbound
