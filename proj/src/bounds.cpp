#include "tailbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "tailbound/fractional.hpp"
#include "tailbound/optimize.hpp"

namespace tailbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

void require_nonempty(std::size_t n) {
  if (n == 0) throw std::domain_error("MartingaleConditions: n must be positive");
}

void require_all(std::span<const double> v, bool (*ok)(double), const char* what) {
  for (double x : v)
    if (!ok(x)) throw std::domain_error(what);
}

}  // namespace

double const_e() { return std::numbers::e; }
double const_e2_over_2() { return std::exp(2.0) / 2.0; }
double const_2e3_over_9() { return 2.0 * std::exp(3.0) / 9.0; }
double const_e3_over_2() { return const_e() * const_e2_over_2(); }

// --- Hoeffding ---------------------------------------------------------------

double hoeffding_H(double a, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("hoeffding_H: p outside [0, 1]");
  if (a <= p) return 1.0;
  if (a > 1.0) return 0.0;
  if (a == 1.0) return p;
  if (p == 0.0) return 0.0;
  return std::exp((1.0 - a) * std::log((1.0 - p) / (1.0 - a)) + a * std::log(p / a));
}

namespace {

double hoeffding_power(double a, double p, std::int64_t n) {
  const double h = hoeffding_H(a, p);
  if (h == 0.0) return 0.0;
  return std::exp(static_cast<double>(n) * std::log(h));
}

}  // namespace

double hoeffding_range_bound(std::int64_t n, double p, double x) {
  if (n < 1) throw std::domain_error("hoeffding_range_bound: n must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("hoeffding_range_bound: p must lie in (0, 1)");
  return hoeffding_power(p + x / static_cast<double>(n), p, n);
}

double hoeffding_variance_bound(std::int64_t n, double sigma2, double b, double x) {
  if (n < 1) throw std::domain_error("hoeffding_variance_bound: n must be positive");
  if (!(sigma2 > 0.0) || !(b > 0.0)) throw std::domain_error("hoeffding_variance_bound: need sigma2 > 0 and b > 0");
  const double s2 = sigma2 / (b * b);
  const double xs = x / b;
  const double a = (s2 + xs / static_cast<double>(n)) / (1.0 + s2);
  return hoeffding_power(a, s2 / (1.0 + s2), n);
}

// --- MartingaleConditions -----------------------------------------------------

std::string to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::one_sided_variance: return "one_sided_variance";
    case ConditionKind::range: return "range";
    case ConditionKind::per_step: return "per_step";
    case ConditionKind::symmetric: return "symmetric";
  }
  return "unknown";
}

MartingaleConditions::MartingaleConditions(ConditionKind kind, std::vector<double> bs, std::vector<double> sigma2s,
                                           std::vector<double> ps)
    : kind_(kind), n_(bs.size()), bs_(std::move(bs)), sigma2s_(std::move(sigma2s)), ps_(std::move(ps)) {}

MartingaleConditions MartingaleConditions::one_sided_variance(double b, std::vector<double> sigma2s) {
  require_nonempty(sigma2s.size());
  if (!(b > 0.0) || !std::isfinite(b)) throw std::domain_error("one_sided_variance: b must be positive");
  require_all(sigma2s, [](double v) { return v >= 0.0 && std::isfinite(v); }, "one_sided_variance: sigma_k^2 must be >= 0");
  std::vector<double> bs(sigma2s.size(), b);
  return MartingaleConditions(ConditionKind::one_sided_variance, std::move(bs), std::move(sigma2s), {});
}

MartingaleConditions MartingaleConditions::range(std::vector<double> ps) {
  require_nonempty(ps.size());
  require_all(ps, [](double v) { return v >= 0.0 && v <= 1.0; }, "range: p_k must lie in [0, 1]");
  std::vector<double> bs(ps.size());
  std::vector<double> s2(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    bs[k] = 1.0 - ps[k];
    s2[k] = ps[k] * (1.0 - ps[k]);
  }
  return MartingaleConditions(ConditionKind::range, std::move(bs), std::move(s2), std::move(ps));
}

MartingaleConditions MartingaleConditions::per_step(std::vector<double> bs, std::vector<double> sigma2s) {
  require_nonempty(bs.size());
  if (bs.size() != sigma2s.size()) throw std::domain_error("per_step: b_k and sigma_k^2 lists differ in length");
  require_all(bs, [](double v) { return v >= 0.0 && std::isfinite(v); }, "per_step: b_k must be >= 0");
  require_all(sigma2s, [](double v) { return v >= 0.0 && std::isfinite(v); }, "per_step: sigma_k^2 must be >= 0");
  return MartingaleConditions(ConditionKind::per_step, std::move(bs), std::move(sigma2s), {});
}

MartingaleConditions MartingaleConditions::symmetric(std::vector<double> bs) {
  require_nonempty(bs.size());
  require_all(bs, [](double v) { return v >= 0.0 && std::isfinite(v); }, "symmetric: b_k must be >= 0");
  std::vector<double> s2(bs.size());
  std::transform(bs.begin(), bs.end(), s2.begin(), [](double b) { return b * b; });
  return MartingaleConditions(ConditionKind::symmetric, std::move(bs), std::move(s2), {});
}

double MartingaleConditions::mean_sigma2() const { return mean_of(sigma2s_); }

double MartingaleConditions::mean_p() const {
  if (kind_ != ConditionKind::range) throw std::domain_error("mean_p: only defined under the range condition");
  return mean_of(ps_);
}

double MartingaleConditions::a2() const {
  double s = 0.0;
  for (std::size_t k = 0; k < n_; ++k) s += std::max(bs_[k] * bs_[k], sigma2s_[k]);
  return s / static_cast<double>(n_);
}

std::optional<double> MartingaleConditions::common_b() const {
  if (std::all_of(bs_.begin(), bs_.end(), [&](double b) { return b == bs_.front(); })) return bs_.front();
  return std::nullopt;
}

// --- hull bounds ----------------------------------------------------------------

BernoulliSumBound::BernoulliSumBound(const TwoPointDist& atom, std::int64_t n, double constant)
    : atom_(atom), survival_(iid_sum_survival(atom, n)), hull_(log_concave_hull(survival_)), constant_(constant) {}

BoundResult BernoulliSumBound::operator()(double x) const {
  const double h = hull_(x);
  return {constant_ * h, constant_, h};
}

namespace {

double require_common_b(const MartingaleConditions& cond, const char* who) {
  if (cond.kind() != ConditionKind::one_sided_variance && cond.kind() != ConditionKind::per_step)
    throw std::domain_error(std::string(who) + ": needs the one-sided bound with variances");
  const auto b = cond.common_b();
  if (!b || !(*b > 0.0)) throw std::domain_error(std::string(who) + ": needs a common positive b");
  return *b;
}

double require_mean_p(const MartingaleConditions& cond, const char* who) {
  if (cond.kind() != ConditionKind::range) throw std::domain_error(std::string(who) + ": needs the range condition");
  const double p = cond.mean_p();
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error(std::string(who) + ": mean p must lie in (0, 1)");
  return p;
}

double require_a(const MartingaleConditions& cond, const char* who) {
  if (cond.kind() == ConditionKind::range) throw std::domain_error(std::string(who) + ": range condition not supported");
  const double a2 = cond.a2();
  if (!(a2 > 0.0)) throw std::domain_error(std::string(who) + ": a must be positive");
  return std::sqrt(a2);
}

}  // namespace

BernoulliSumBound one_sided_hull_bound(const MartingaleConditions& cond) {
  const double b = require_common_b(cond, "one_sided_hull_bound");
  const double s2 = cond.mean_sigma2();
  if (!(s2 > 0.0)) throw std::domain_error("one_sided_hull_bound: mean variance must be positive");
  return BernoulliSumBound(two_point_from_variance(s2, b), static_cast<std::int64_t>(cond.n()), const_e2_over_2());
}

BernoulliSumBound range_hull_bound(const MartingaleConditions& cond) {
  const double p = require_mean_p(cond, "range_hull_bound");
  return BernoulliSumBound(TwoPointDist(-p, 1.0 - p, 1.0 - p, p), static_cast<std::int64_t>(cond.n()), const_e());
}

BernoulliSumBound symmetric_hull_bound(const MartingaleConditions& cond) {
  const double a = require_a(cond, "symmetric_hull_bound");
  return BernoulliSumBound(TwoPointDist(-a, a, 0.5, 0.5), static_cast<std::int64_t>(cond.n()), const_2e3_over_9());
}

BoundResult one_sided_bound(const MartingaleConditions& cond, double x) { return one_sided_hull_bound(cond)(x); }

BoundResult one_sided_poisson_bound(const MartingaleConditions& cond, double x) {
  const double b = require_common_b(cond, "one_sided_poisson_bound");
  const double lambda = cond.mean_sigma2() * static_cast<double>(cond.n()) / (b * b);
  if (!(lambda > 0.0)) throw std::domain_error("one_sided_poisson_bound: lambda must be positive");
  const double h = poisson_hull_eval(lambda, lambda + x / b);
  return {const_e2_over_2() * h, const_e2_over_2(), h};
}

BoundResult range_bound(const MartingaleConditions& cond, double x) { return range_hull_bound(cond)(x); }

BoundResult range_poisson_bound(const MartingaleConditions& cond, double x) {
  const double p = require_mean_p(cond, "range_poisson_bound");
  const double lambda = p * static_cast<double>(cond.n()) / (1.0 - p);
  const double h = poisson_hull_eval(lambda, lambda + x / (1.0 - p));
  return {const_e3_over_2() * h, const_e3_over_2(), h};
}

BoundResult symmetric_bound(const MartingaleConditions& cond, double x) { return symmetric_hull_bound(cond)(x); }

BoundResult symmetric_gaussian_bound(const MartingaleConditions& cond, double x) {
  const double a = require_a(cond, "symmetric_gaussian_bound");
  // S_n has standard deviation a * sqrt(n).
  const double h = gaussian_survival(x / (a * std::sqrt(static_cast<double>(cond.n()))));
  return {const_2e3_over_9() * h, const_2e3_over_9(), h};
}

// --- MGF bound ---------------------------------------------------------------------

namespace {

constexpr int kMgfGrid = 200;
constexpr double kMgfHMin = 1e-6;
constexpr double kMgfHMax = 50.0;
constexpr double kMgfAgreement = 1e-8;

}  // namespace

MgfBoundResult mgf_bound(std::span<const ThetaSpec> specs, double x) {
  if (specs.empty()) throw std::domain_error("mgf_bound: need at least one difference");
  std::vector<TwoPointDist> atoms;
  atoms.reserve(specs.size());
  double top = 0.0;
  double b_scale = 0.0;
  double log_top_mass = 0.0;
  for (const auto& s : specs) {
    atoms.push_back(two_point_from_variance(s.sigma2, s.b));
    top += s.b;
    b_scale = std::max(b_scale, s.b);
    log_top_mass += std::log(atoms.back().p_hi());
  }

  MgfBoundResult out{};
  const double top_tol = 1e-12 * std::max(1.0, std::fabs(top));
  if (x <= 0.0) {
    out = {1.0, 0.0, std::nullopt};
  } else if (x > top + top_tol) {
    out = {0.0, kInf, std::nullopt};
  } else if (x >= top - top_tol) {
    out = {std::exp(log_top_mass), kInf, std::nullopt};
  } else {
    std::vector<double> log_lo(atoms.size());
    std::vector<double> log_hi(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      log_lo[k] = std::log(atoms[k].p_lo());
      log_hi[k] = std::log(atoms[k].p_hi());
    }
    auto log_objective = [&](double h) {
      double acc = -h * x;
      for (std::size_t k = 0; k < atoms.size(); ++k)
        acc += log_add_exp(log_lo[k] + h * atoms[k].v_lo(), log_hi[k] + h * atoms[k].v_hi());
      return acc;
    };
    const double h_lo = kMgfHMin / b_scale;
    const double ratio = std::pow(kMgfHMax / kMgfHMin, 1.0 / (kMgfGrid - 1));
    std::vector<double> hs(kMgfGrid);
    int best = 0;
    double best_val = kInf;
    for (int i = 0; i < kMgfGrid; ++i) {
      hs[i] = h_lo * std::pow(ratio, i);
      const double v = log_objective(hs[i]);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    double a = 0.0;
    double b = 0.0;
    if (best == kMgfGrid - 1) {
      // Minimizer beyond the grid: the objective is convex, so walk outwards.
      double h = hs.back();
      while (h < 1e12 / b_scale && log_objective(2.0 * h) < log_objective(h)) h *= 2.0;
      a = 0.5 * h;
      b = 2.0 * h;
    } else {
      a = best > 0 ? hs[best - 1] : 0.0;
      b = hs[best + 1];
    }
    const Minimum m = golden_section_min(log_objective, a, b, 1e-13, 400);
    const double v = std::min(m.value, best_val);
    out = {std::exp(v), m.value <= best_val ? m.arg : hs[best], std::nullopt};
  }

  const double b0 = specs.front().b;
  const bool common_b = std::all_of(specs.begin(), specs.end(), [&](const ThetaSpec& s) { return s.b == b0; });
  if (common_b) {
    const bool identical =
        std::all_of(specs.begin(), specs.end(), [&](const ThetaSpec& s) { return s.sigma2 == specs.front().sigma2; });
    double s2 = 0.0;
    for (const auto& s : specs) s2 += s.sigma2;
    const auto n = static_cast<std::int64_t>(specs.size());
    s2 /= static_cast<double>(n);
    const double a = (s2 + b0 * x / static_cast<double>(n)) / (b0 * b0 + s2);
    const double closed = hoeffding_power(a, s2 / (b0 * b0 + s2), n);
    out.closed_form = closed;
    const double tol = kMgfAgreement * std::max(closed, std::numeric_limits<double>::min());
    if (identical ? std::fabs(out.value - closed) > tol : out.value > closed + tol)
      throw std::runtime_error("mgf_bound: numeric infimum " + format_double(out.value) +
                               " disagrees with closed form " + format_double(closed));
  }
  return out;
}

FractionalMomentResult fractional_moment_bound(const DiscreteDist& t_dist, double s, double x) {
  if (!(s >= 2.0)) throw std::domain_error("fractional_moment_bound: s must be >= 2");
  const StepSurvival surv = t_dist.survival();
  const LogLinearHull hull = log_concave_hull(surv);
  const InfimumResult inf = lhs_inf(surv, s, x);
  const double coarse = rhs_bound(hull, s, x);
  if (inf.value > coarse + 1e-9)
    throw std::runtime_error("fractional_moment_bound: infimum exceeds the hull form at x = " + format_double(x));
  return {inf.value, inf.argmin, coarse};
}

// --- n = 1 and classical envelopes ------------------------------------------------------

double exact_n1(const RangeCase& c, double x) {
  if (!(c.a < 0.0) || !(c.b > 0.0)) throw std::domain_error("exact_n1: need a < 0 < b");
  if (x <= 0.0) return 1.0;
  if (x > c.b) return 0.0;
  return -c.a / (x - c.a);
}

double exact_n1(const VarianceCase& c, double x) {
  if (!(c.sigma2 > 0.0) || !(c.b > 0.0)) throw std::domain_error("exact_n1: need sigma2 > 0 and b > 0");
  if (x <= 0.0) return 1.0;
  if (x > c.b) return 0.0;
  return c.sigma2 / (x * x + c.sigma2);
}

double poisson_tail_rough(double lambda, double x) {
  if (!(lambda > 0.0) || !(x >= 0.0)) throw std::domain_error("poisson_tail_rough: need lambda > 0 and x >= 0");
  return std::exp(x - (x + lambda) * std::log1p(x / lambda));
}

double poisson_tail_sharp(double lambda, double x) {
  if (!(lambda > 0.0)) throw std::domain_error("poisson_tail_sharp: lambda must be positive");
  if (!(x >= std::max(lambda - 1.0, 1.0))) throw std::domain_error("poisson_tail_sharp: need x >= max{lambda - 1, 1}");
  const double u = lambda + x;
  const double frac = u - std::floor(u);
  const double l1p = std::log1p(x / lambda);
  return std::exp(-0.5 * std::log(u) + (frac - 1.0) * l1p + x - u * l1p);
}

double gaussian_tail_upper(double x) {
  if (!(x > 0.0)) throw std::domain_error("gaussian_tail_upper: x must be positive");
  return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * x);
}

// --- confidence limits ----------------------------------------------------------------------

double confidence_tail_bound(std::int64_t n, double sample_mean, double mu) {
  if (n < 1) throw std::domain_error("confidence_tail_bound: n must be positive");
  if (!(mu > 0.0 && mu < 1.0)) throw std::domain_error("confidence_tail_bound: mu must lie in (0, 1)");
  const auto cond = MartingaleConditions::range(std::vector<double>(static_cast<std::size_t>(n), 1.0 - mu));
  return range_bound(cond, static_cast<double>(n) * (mu - sample_mean)).value;
}

ConfidenceResult invert_for_confidence(std::int64_t n, double sample_mean, double delta) {
  if (n < 1) throw std::domain_error("invert_for_confidence: n must be positive");
  if (!(sample_mean >= 0.0 && sample_mean <= 1.0)) throw std::domain_error("invert_for_confidence: mean outside [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("invert_for_confidence: delta must lie in (0, 1)");
  // At mu = 1 every observation equals 1 almost surely; nothing is excluded.
  if (sample_mean == 1.0) return {1.0, const_e()};

  double lo = sample_mean;
  // mu -> 0 puts the threshold on the top atom of a sum whose mass there tends to 1.
  double f_lo = sample_mean > 0.0 ? confidence_tail_bound(n, sample_mean, lo) : const_e();
  if (f_lo < delta) return {lo, f_lo};
  double hi = 1.0;
  double f_hi = 0.0;
  constexpr double kMonotoneSlack = 1e-9;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double f = confidence_tail_bound(n, sample_mean, mid);
    if (f > f_lo * (1.0 + kMonotoneSlack) || f < f_hi * (1.0 - kMonotoneSlack))
      throw std::runtime_error("invert_for_confidence: bound is not monotone in mu near " + format_double(mid));
    if (f >= delta) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
  }
  return {lo, f_lo};
}

}  // namespace tailbound
