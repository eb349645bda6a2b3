#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"
#include "tailbound/verify.hpp"

namespace tailbound {

namespace {

constexpr double kCompareSlack = 1e-10;

double positive_part_power(double z, double t, double s) {
  const double u = z - t;
  return u > 0.0 ? std::pow(u, s) : 0.0;
}

DiscreteDist theta_law(double sigma2) {
  if (sigma2 == 0.0) return DiscreteDist::point_mass(0.0);
  return two_point_from_variance(sigma2, 1.0).to_discrete();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

DiscreteDist random_centered_law(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 7);
  std::uniform_int_distribution<int> slot(-8, 8);
  std::exponential_distribution<double> gamma1(1.0);
  for (;;) {
    const int k = count(rng);
    std::vector<double> pts;
    std::vector<double> w;
    for (int i = 0; i < k; ++i) {
      pts.push_back(0.25 * slot(rng));
      w.push_back(gamma1(rng));
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double mean = 0.0;
    for (int i = 0; i < k; ++i) {
      w[i] /= total;
      mean += w[i] * pts[i];
    }
    for (double& p : pts) p -= mean;
    auto law = DiscreteDist::from_probabilities(pts, w);
    if (law.size() >= 2) return law;
  }
}

// --- comparison inequalities --------------------------------------------------------

Comparison schur_check(std::span<const double> xs, double t) {
  if (xs.empty() || xs.size() > 8) throw std::domain_error("schur_check: need 1 to 8 values");
  for (double x : xs)
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("schur_check: values must be nonnegative");
  DiscreteDist tn = theta_law(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) tn = convolve(tn, theta_law(xs[k]));
  const double a = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const DiscreteDist atom = theta_law(a);
  DiscreteDist sn = atom;
  for (std::size_t k = 1; k < xs.size(); ++k) sn = convolve(sn, atom);
  auto f = [t](double z) { return positive_part_power(z, t, 2.0); };
  const double lhs = tn.expect(f);
  const double rhs = sn.expect(f);
  return {lhs, rhs, lhs <= rhs + kCompareSlack};
}

std::string to_string(DominationFamily f) {
  switch (f) {
    case DominationFamily::convex: return "convex";
    case DominationFamily::moment: return "moment";
    case DominationFamily::symmetric: return "symmetric";
  }
  return "unknown";
}

DominationResult convex_domination_check(DominationFamily family, const DiscreteDist& x,
                                         const DominationParams& params) {
  const auto supp = x.support();
  const double scale = std::max({1.0, std::fabs(supp.front()), std::fabs(supp.back())});
  if (std::fabs(x.mean()) > 1e-12 * scale) throw std::domain_error("convex_domination_check: X is not centered");

  std::vector<std::pair<std::string, std::function<double(double)>>> fns;
  DiscreteDist atom = DiscreteDist::point_mass(0.0);
  const double tol = 1e-12 * scale;
  if (family == DominationFamily::convex) {
    if (!(params.a < 0.0 && params.b > 0.0)) throw std::domain_error("convex_domination_check: need a < 0 < b");
    if (supp.front() < params.a - tol || supp.back() > params.b + tol)
      throw std::domain_error("convex_domination_check: support leaves [a, b]");
    atom = two_point_from_range(params.a, params.b).to_discrete();
    for (double t : linspace(params.a, params.b, 41))
      fns.emplace_back("(z-" + format_double(t) + ")_+", [t](double z) { return z > t ? z - t : 0.0; });
  } else {
    if (!(params.b > 0.0 && params.sigma2 > 0.0))
      throw std::domain_error("convex_domination_check: need b > 0 and sigma2 > 0");
    if (supp.back() > params.b + tol) throw std::domain_error("convex_domination_check: support exceeds b");
    if (x.second_moment() > params.sigma2 * (1.0 + 1e-12))
      throw std::domain_error("convex_domination_check: second moment exceeds sigma2");
    double lo = std::min(supp.front(), -params.sigma2 / params.b);
    if (family == DominationFamily::moment) {
      atom = two_point_from_variance(params.sigma2, params.b).to_discrete();
    } else {
      const double a = std::max(std::sqrt(params.sigma2), params.b);
      atom = TwoPointDist(-a, a, 0.5, 0.5).to_discrete();
      lo = std::min(lo, -a);
    }
    for (double s : {2.0, 2.5, 3.0})
      for (double t : linspace(lo, params.b, 41))
        fns.emplace_back("(z-" + format_double(t) + ")_+^" + format_double(s),
                         [t, s](double z) { return positive_part_power(z, t, s); });
    for (double h : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double hb = h / params.b;
      fns.emplace_back("exp(" + format_double(hb) + " z)", [hb](double z) { return std::exp(hb * z); });
    }
  }

  DominationResult out{-std::numeric_limits<double>::infinity(), "", true};
  for (const auto& [name, f] : fns) {
    const double lhs = x.expect(f);
    const double rhs = atom.expect(f);
    const double margin = lhs - rhs;
    if (margin > out.worst_margin) {
      out.worst_margin = margin;
      out.worst_function = name;
    }
    if (margin > kCompareSlack * std::max(1.0, std::fabs(rhs))) out.holds = false;
  }
  return out;
}

bool is_log_concave_sequence(std::span<const double> p, double rel_tol) {
  for (std::size_t k = 1; k + 1 < p.size(); ++k)
    if (p[k] * p[k] < p[k - 1] * p[k + 1] * (1.0 - rel_tol)) return false;
  return true;
}

namespace {

void require_log_concave_input(std::span<const double> p) {
  if (p.empty()) throw std::domain_error("convolution_log_concavity_check: empty sequence");
  for (double v : p)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("convolution_log_concavity_check: negative mass");
  const auto first = std::find_if(p.begin(), p.end(), [](double v) { return v > 0.0; });
  if (first == p.end()) throw std::domain_error("convolution_log_concavity_check: all masses are zero");
  const auto last = std::find_if(p.rbegin(), p.rend(), [](double v) { return v > 0.0; }).base();
  if (std::any_of(first, last, [](double v) { return v == 0.0; }))
    throw std::domain_error("convolution_log_concavity_check: support has a gap");
  if (!is_log_concave_sequence(p)) throw std::domain_error("convolution_log_concavity_check: input not log-concave");
}

std::vector<double> tail_sums(std::span<const double> p) {
  std::vector<double> t(p.size());
  double acc = 0.0;
  for (std::size_t k = p.size(); k-- > 0;) {
    acc += p[k];
    t[k] = acc;
  }
  return t;
}

}  // namespace

bool convolution_log_concavity_check(std::span<const double> p, std::span<const double> q) {
  require_log_concave_input(p);
  require_log_concave_input(q);
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return is_log_concave_sequence(r) && is_log_concave_sequence(tail_sums(p)) &&
         is_log_concave_sequence(tail_sums(q)) && is_log_concave_sequence(tail_sums(r));
}

OptimalityReport hoeffding_optimality_sequence(double p, double z, std::span<const std::int64_t> ns) {
  if (!(p > 0.0 && p < z && z < 1.0)) throw std::domain_error("hoeffding_optimality_sequence: need 0 < p < z < 1");
  OptimalityReport r;
  r.f = z * std::log(z / p) + (1.0 - z) * std::log((1.0 - z) / (1.0 - p));
  r.hoeffding = hoeffding_H(z, p);
  r.matches_h = std::fabs(std::exp(-r.f) - r.hoeffding) <= 1e-12;
  r.dominated = true;
  r.gap_decreasing = true;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (std::int64_t n : ns) {
    if (n < 1) throw std::domain_error("hoeffding_optimality_sequence: n must be positive");
    const double zn = z * static_cast<double>(n);
    const auto k = static_cast<std::int64_t>(std::ceil(zn - 1e-9 * std::max(1.0, zn)));
    const double g = binomial_log_survival(n, p, k) / static_cast<double>(n);
    r.ns.push_back(n);
    r.g.push_back(g);
    if (g > -r.f + 1e-12) r.dominated = false;
    const double gap = std::fabs(g + r.f);
    if (!(gap < prev_gap)) r.gap_decreasing = false;
    prev_gap = gap;
  }
  r.final_gap = prev_gap;
  return r;
}

double hull_necessity_ratio(double sigma2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("hull_necessity_ratio: sigma2 must be positive");
  const TwoPointDist eps = two_point_from_variance(sigma2, 1.0);
  // P{X >= 0} = 1 for X = 0; eps >= 0 only at its upper atom.
  return 1.0 / eps.p_hi();
}

std::vector<double> poisson_limit_check(std::int64_t n, double sigma2_total, double b, std::span<const std::int64_t> ms,
                                        double x) {
  if (n < 0 || !(sigma2_total > 0.0) || !(b > 0.0))
    throw std::domain_error("poisson_limit_check: need n >= 0, sigma2_total > 0 and b > 0");
  const double lambda = sigma2_total / (b * b);
  const double y = lambda + x / b;
  auto ceil_tol = [](double v) {
    return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(v - 1e-9 * std::max(1.0, std::fabs(v)))));
  };
  const double target = poisson_survival(lambda, ceil_tol(y));
  std::vector<double> gaps;
  for (std::int64_t m : ms) {
    const std::int64_t big_n = n + m;
    if (big_n < 1) throw std::domain_error("poisson_limit_check: n + m must be positive");
    const double nn = static_cast<double>(big_n);
    const double q = lambda / (nn + lambda);
    const std::int64_t k = ceil_tol(y / (1.0 + lambda / nn));
    const double binom = k > big_n ? 0.0 : std::exp(binomial_log_survival(big_n, q, k));
    gaps.push_back(std::fabs(binom - target));
  }
  return gaps;
}

// --- Monte Carlo --------------------------------------------------------------------------

PathSampler iid_uniform_sampler(std::vector<double> points, std::int64_t n) {
  if (points.empty() || n < 1) throw std::domain_error("iid_uniform_sampler: need points and n >= 1");
  return [points = std::move(points), n](std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    double sum = 0.0;
    for (std::int64_t k = 0; k < n; ++k) sum += points[pick(rng)];
    return sum;
  };
}

namespace {

constexpr std::int64_t kChunk = 1 << 14;
constexpr std::uint64_t kMonteCarloStream = 0x4d43;

}  // namespace

std::vector<MonteCarloEstimate> monte_carlo_tails(const PathSampler& sampler, std::int64_t trials,
                                                  std::span<const double> xs, std::uint64_t seed, Execution exec) {
  if (trials < 10'000) throw std::domain_error("monte_carlo_tail: need at least 10^4 trials");
  const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::vector<std::int64_t>> counts(static_cast<std::size_t>(chunks), std::vector<std::int64_t>(xs.size()));
  std::vector<double> thresholds(xs.begin(), xs.end());
  for (double& t : thresholds) t -= 1e-12 * std::max(1.0, std::fabs(t));
  detail::parallel_for(chunks, exec, [&](std::int64_t c) {
    auto rng = instance_rng(seed, kMonteCarloStream, static_cast<std::uint64_t>(c));
    const std::int64_t todo = std::min(kChunk, trials - c * kChunk);
    auto& cnt = counts[static_cast<std::size_t>(c)];
    for (std::int64_t i = 0; i < todo; ++i) {
      const double m = sampler(rng);
      for (std::size_t j = 0; j < thresholds.size(); ++j)
        if (m >= thresholds[j]) ++cnt[j];
    }
  });
  std::vector<MonteCarloEstimate> out;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    std::int64_t total = 0;
    for (const auto& cnt : counts) total += cnt[j];
    const double est = static_cast<double>(total) / static_cast<double>(trials);
    out.push_back({est, std::sqrt(est * (1.0 - est) / static_cast<double>(trials)), trials});
  }
  return out;
}

MonteCarloEstimate monte_carlo_tail(const PathSampler& sampler, std::int64_t trials, double x, std::uint64_t seed,
                                    Execution exec) {
  const double xs[] = {x};
  return monte_carlo_tails(sampler, trials, xs, seed, exec).front();
}

}  // namespace tailbound
