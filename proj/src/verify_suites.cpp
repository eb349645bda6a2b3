#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "tailbound/fractional.hpp"
#include "tailbound/hull.hpp"
#include "tailbound/verify.hpp"

namespace tailbound {

namespace {

using detail::sweep;
using MaybeCe = std::optional<Counterexample>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(std::span<const double> v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_double(v[i]);
  }
  return s;
}

std::string law_params(const DiscreteDist& d) {
  std::vector<double> probs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) probs[i] = d.prob(i);
  return "support=" + join(d.support()) + ";probs=" + join(probs);
}

/// Knots, midpoints between them, and points just outside.
std::vector<double> probe_points(std::span<const double> knots) {
  std::vector<double> xs(knots.begin(), knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i) xs.push_back(0.5 * (knots[i - 1] + knots[i]));
  const double span = std::max(1.0, knots.back() - knots.front());
  xs.push_back(knots.front() - 0.5 * span);
  xs.push_back(knots.back() + 0.5 * span);
  return xs;
}

std::string note(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

}  // namespace

// --- fractional-moment and MGF sweeps --------------------------------------------------

CheckSummary fractional_moment_sweep(Execution exec, std::vector<Counterexample>* out) {
  static constexpr double kPs[] = {0.02, 0.1, 0.3, 0.5, 0.7};
  static constexpr double kSs[] = {1.0, 2.0, 2.5, 3.0};
  constexpr std::int64_t kMaxN = 50;
  const std::int64_t count = kMaxN * static_cast<std::int64_t>(std::size(kPs));
  return sweep("fractional moment", count, exec, out, [&](std::int64_t i) -> MaybeCe {
    const double p = kPs[i / kMaxN];
    const std::int64_t n = i % kMaxN + 1;
    const StepSurvival surv = iid_sum_survival(two_point_from_range(-p, 1.0 - p), n);
    const LogLinearHull hull = log_concave_hull(surv);
    const auto xs = surv.knots();
    std::vector<double> probes(xs.begin() + 1, xs.end());
    for (std::size_t k = 1; k < xs.size(); ++k) probes.push_back(0.5 * (xs[k - 1] + xs[k]));
    for (double s : kSs)
      for (double x : probes) {
        const double lhs = lhs_inf(surv, s, x).value;
        const double rhs = rhs_bound(hull, s, x);
        if (lhs > rhs + 1e-9)
          return Counterexample{"fractional moment",
                                "n=" + std::to_string(n) + ";p=" + format_double(p) + ";s=" + format_double(s) +
                                    ";x=" + format_double(x),
                                lhs, rhs};
      }
    return std::nullopt;
  });
}

CheckSummary mgf_closed_form_sweep(Execution exec, std::vector<Counterexample>* out) {
  static constexpr std::int64_t kNs[] = {1, 2, 3, 5, 8, 13, 20};
  static constexpr double kSigma2[] = {0.05, 0.2, 0.5, 1.0, 2.0, 5.0};
  constexpr int kXs = 21;
  const auto count = static_cast<std::int64_t>(std::size(kNs) * std::size(kSigma2));
  return sweep("mgf closed form", count, exec, out, [&](std::int64_t i) -> MaybeCe {
    const std::int64_t n = kNs[i / std::ssize(kSigma2)];
    const double s2 = kSigma2[i % std::ssize(kSigma2)];
    const std::vector<ThetaSpec> specs(static_cast<std::size_t>(n), ThetaSpec{s2, 1.0});
    for (int j = 0; j < kXs; ++j) {
      const double x = static_cast<double>(n) * j / (kXs - 1);
      const std::string params = "n=" + std::to_string(n) + ";sigma2=" + format_double(s2) + ";x=" + format_double(x);
      try {
        const MgfBoundResult r = mgf_bound(specs, x);
        const double closed = r.closed_form.value_or(kNaN);
        if (!(std::fabs(r.value - closed) <= 1e-8 * closed) && !(r.value == 0.0 && closed == 0.0))
          return Counterexample{"mgf", params, r.value, closed};
      } catch (const std::runtime_error&) {
        return Counterexample{"mgf", params, kNaN, kNaN};
      }
    }
    return std::nullopt;
  });
}

// --- martingale enumeration -------------------------------------------------------------

CheckSummary dominance_enumeration(ConditionKind kind, std::int64_t n, Execution exec,
                                   std::vector<Counterexample>* out) {
  if (n < 1 || n > 3) throw std::domain_error("dominance_enumeration: n must lie in 1..3");
  std::vector<double> levels;
  switch (kind) {
    case ConditionKind::range: levels = {0.2, 0.5, 0.8}; break;
    case ConditionKind::one_sided_variance: levels = {0.25, 1.0, 4.0}; break;
    case ConditionKind::symmetric:
    case ConditionKind::per_step: levels = {0.5, 1.0, 2.0}; break;
  }
  const std::vector<double> unit = n <= 2 ? std::vector<double>{0.25, 0.5, 0.75, 1.0} : std::vector<double>{0.5, 1.0};
  std::vector<NodeParams> options{{0.0, 0.0}};
  for (double u : unit)
    for (double v : unit) options.push_back({u, v});

  const std::size_t m = (std::size_t{1} << n) - 1;
  std::int64_t trees = 1;
  for (std::size_t j = 0; j < m; ++j) trees *= std::ssize(options);
  std::int64_t sets = 1;
  for (std::int64_t k = 0; k < n; ++k) sets *= std::ssize(levels);

  std::vector<MartingaleConditions> conds;
  std::vector<BernoulliSumBound> bounds;
  for (std::int64_t s = 0; s < sets; ++s) {
    std::vector<double> v(static_cast<std::size_t>(n));
    std::int64_t r = s;
    for (auto& x : v) {
      x = levels[static_cast<std::size_t>(r % std::ssize(levels))];
      r /= std::ssize(levels);
    }
    switch (kind) {
      case ConditionKind::range: conds.push_back(MartingaleConditions::range(v)); break;
      case ConditionKind::one_sided_variance: conds.push_back(MartingaleConditions::one_sided_variance(1.0, v)); break;
      case ConditionKind::symmetric: conds.push_back(MartingaleConditions::symmetric(v)); break;
      case ConditionKind::per_step:
        conds.push_back(MartingaleConditions::per_step(v, std::vector<double>(v.size(), 1.0)));
        break;
    }
    bounds.push_back(applicable_bound(conds.back()));
  }

  return sweep("dominance " + to_string(kind) + " n=" + std::to_string(n), sets * trees, exec, out,
               [&](std::int64_t i) -> MaybeCe {
                 const auto set = static_cast<std::size_t>(i / trees);
                 std::int64_t r = i % trees;
                 std::vector<NodeParams> params(m);
                 for (auto& p : params) {
                   p = options[static_cast<std::size_t>(r % std::ssize(options))];
                   r /= std::ssize(options);
                 }
                 const auto tree = MartingaleTree::two_point(conds[set], params);
                 const auto paths = tree.paths();
                 std::vector<double> xs = probe_points(bounds[set].survival().knots());
                 for (const auto& p : paths) xs.push_back(p.sum);
                 for (double x : xs) {
                   const double shifted = x - 1e-12 * std::max(1.0, std::fabs(x));
                   double lhs = 0.0;
                   for (const auto& p : paths)
                     if (p.sum >= shifted) lhs += std::exp(p.log_prob);
                   const double rhs = bounds[set](shifted).value;
                   if (lhs > rhs + 1e-12) {
                     std::string desc = "kind=" + to_string(kind) + ";levels=";
                     std::vector<double> lv(conds[set].sigma2s().begin(), conds[set].sigma2s().end());
                     if (kind == ConditionKind::range) lv.assign(conds[set].ps().begin(), conds[set].ps().end());
                     if (kind == ConditionKind::symmetric) lv.assign(conds[set].bs().begin(), conds[set].bs().end());
                     desc += join(lv) + ";tree=";
                     for (const auto& p : params) desc += format_double(p.u) + ":" + format_double(p.v) + "|";
                     desc += ";x=" + format_double(x);
                     return Counterexample{"dominance", desc, lhs, rhs};
                   }
                 }
                 return std::nullopt;
               });
}

CheckSummary extremal_n1_search(std::int64_t samples, std::uint64_t seed, Execution exec,
                                std::vector<Counterexample>* out) {
  return sweep("extremal n=1", samples, exec, out, [&](std::int64_t i) -> MaybeCe {
    auto rng = instance_rng(seed, 0x3233, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const DiscreteDist law = random_centered_law(rng);
    const StepSurvival surv = law.survival();
    const auto supp = law.support();
    const double stretch = 1.0 + 0.5 * unit(rng);
    const bool range = i % 2 == 0;
    const double b = supp.back() * stretch;
    const double x = b * (1.0 - unit(rng));
    if (!(x > 0.0)) return std::nullopt;
    double extremal = 0.0;
    double attained = 0.0;
    std::string desc;
    if (range) {
      const double a = supp.front() * stretch;
      extremal = exact_n1(RangeCase{a, b}, x);
      attained = two_point_from_range(a, x).p_hi();
      desc = "range;a=" + format_double(a);
    } else {
      const double s2 = law.second_moment() * (1.0 + 0.5 * unit(rng));
      extremal = exact_n1(VarianceCase{s2, b}, x);
      attained = two_point_from_variance(s2, x).p_hi();
      desc = "variance;sigma2=" + format_double(s2);
    }
    desc += ";b=" + format_double(b) + ";x=" + format_double(x) + ";" + law_params(law);
    const double tail = surv(x);
    if (tail > extremal + 1e-12) return Counterexample{"extremal n=1 bound", desc, tail, extremal};
    if (std::fabs(attained - extremal) > 1e-12) return Counterexample{"extremal n=1 attained", desc, attained, extremal};
    return std::nullopt;
  });
}

// --- hull and log-concavity -----------------------------------------------------------------

CheckSummary hull_sandwich_sweep(std::int64_t samples, std::uint64_t seed, Execution exec,
                                 std::vector<Counterexample>* out, std::vector<std::string>* notes) {
  std::vector<char> log_concave(static_cast<std::size_t>(samples), 0);
  std::vector<char> envelope_exceeded(static_cast<std::size_t>(samples), 0);
  auto summary = sweep("hull sandwich", samples, exec, out, [&](std::int64_t i) -> MaybeCe {
    auto rng = instance_rng(seed, 0x4855, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> count(2, 12);
    std::uniform_int_distribution<int> slot(-16, 16);
    std::exponential_distribution<double> expo(1.0);
    const int k = count(rng);
    std::vector<double> pts;
    std::vector<double> w;
    for (int j = 0; j < k; ++j) {
      pts.push_back(0.25 * slot(rng));
      const double e = expo(rng);
      w.push_back(e * e * e);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= total;
    const DiscreteDist law = DiscreteDist::from_probabilities(pts, w);
    const StepSurvival surv = law.survival();
    const LogLinearHull hull = log_concave_hull(surv);
    const bool lc = is_log_concave_discrete(surv);
    log_concave[static_cast<std::size_t>(i)] = lc;
    const std::string desc = law_params(law);

    for (double x : probe_points(surv.knots())) {
      const double b = surv(x);
      const double h = hull(x);
      const double env = linear_envelope_eval(surv, x);
      if (b > h + 1e-12) return Counterexample{"B <= hull", desc + ";x=" + format_double(x), b, h};
      if (h > env + 1e-12) {
        if (lc) return Counterexample{"hull <= envelope", desc + ";x=" + format_double(x), h, env};
        envelope_exceeded[static_cast<std::size_t>(i)] = 1;
      }
    }
    const auto hk = hull.knots();
    const auto g = hull.neg_log();
    for (std::size_t j = 2; j < hk.size(); ++j) {
      const double left = (g[j - 1] - g[j - 2]) / (hk[j - 1] - hk[j - 2]);
      const double right = (g[j] - g[j - 1]) / (hk[j] - hk[j - 1]);
      if (right - left < -1e-10) return Counterexample{"hull convexity", desc, right, left};
    }
    std::vector<double> lv(g.begin(), g.end());
    for (double& v : lv) v = -v;
    const LogLinearHull again = log_concave_hull(StepSurvival(std::vector<double>(hk.begin(), hk.end()), lv));
    if (again.size() != hull.size()) return Counterexample{"hull idempotent", desc, double(again.size()), double(hull.size())};
    for (std::size_t j = 0; j < hk.size(); ++j)
      if (again.knots()[j] != hk[j] || std::fabs(again.neg_log()[j] - g[j]) > 1e-12)
        return Counterexample{"hull idempotent", desc, again.neg_log()[j], g[j]};
    return std::nullopt;
  });
  if (notes) {
    const auto lc = std::count(log_concave.begin(), log_concave.end(), 1);
    const auto ex = std::count(envelope_exceeded.begin(), envelope_exceeded.end(), 1);
    notes->push_back("hull sandwich: " + std::to_string(lc) + " of " + std::to_string(samples) +
                     " survivals log-concave; hull exceeds the linear envelope for " + std::to_string(ex) +
                     " of the others");
  }
  return summary;
}

namespace {

std::vector<double> random_log_concave_sequence(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 8);
  std::normal_distribution<double> start(0.0, 1.5);
  std::exponential_distribution<double> drop(1.0);
  const int k = len(rng);
  std::vector<double> p;
  double lp = 0.0;
  double d = start(rng);
  for (int j = 0; j < k; ++j) {
    p.push_back(std::exp(lp));
    lp += d;
    d -= drop(rng);
  }
  return p;
}

bool log_pmf_concave(std::span<const double> lp) {
  for (std::size_t k = 1; k + 1 < lp.size(); ++k)
    if (2.0 * lp[k] < lp[k - 1] + lp[k + 1] - 1e-12 * std::max(1.0, std::fabs(lp[k]))) return false;
  return true;
}

}  // namespace

CheckSummary log_concavity_sweep(std::int64_t samples, std::uint64_t seed, Execution exec,
                                 std::vector<Counterexample>* out) {
  static constexpr double kBinomialP[] = {0.01, 0.1, 0.5, 0.9};
  static constexpr double kLambdas[] = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
  constexpr std::int64_t kMaxN = 200;
  const std::int64_t binomials = kMaxN * std::ssize(kBinomialP);
  const std::int64_t total = samples + binomials + std::ssize(kLambdas) + 1;
  return sweep("log-concavity", total, exec, out, [&](std::int64_t i) -> MaybeCe {
    if (i < samples) {
      auto rng = instance_rng(seed, 0x4c43, static_cast<std::uint64_t>(i));
      const auto p = random_log_concave_sequence(rng);
      const auto q = random_log_concave_sequence(rng);
      if (!convolution_log_concavity_check(p, q))
        return Counterexample{"convolution", "p=" + join(p, ' ') + ";q=" + join(q, ' '), 0.0, 1.0};
      return std::nullopt;
    }
    i -= samples;
    if (i < binomials) {
      const double p = kBinomialP[i / kMaxN];
      const std::int64_t n = i % kMaxN + 1;
      std::vector<double> lp;
      for (std::int64_t k = 0; k <= n; ++k) lp.push_back(binomial_log_pmf(n, k, p));
      const std::string desc = "binomial;n=" + std::to_string(n) + ";p=" + format_double(p);
      if (!log_pmf_concave(lp)) return Counterexample{"binomial pmf", desc, 0.0, 1.0};
      if (!is_log_concave_discrete(iid_sum_survival(two_point_from_range(-p, 1.0 - p), n)))
        return Counterexample{"binomial survival", desc, 0.0, 1.0};
      return std::nullopt;
    }
    i -= binomials;
    if (i < std::ssize(kLambdas)) {
      const double lambda = kLambdas[i];
      const auto top = static_cast<std::int64_t>(lambda + 20.0 * std::sqrt(lambda) + 20.0);
      std::vector<double> knots;
      std::vector<double> lp;
      std::vector<double> ls;
      for (std::int64_t k = 0; k <= top; ++k) {
        knots.push_back(static_cast<double>(k));
        lp.push_back(static_cast<double>(k) * std::log(lambda) - lambda - log_gamma(static_cast<double>(k) + 1.0));
        ls.push_back(poisson_log_survival(lambda, k));
      }
      const std::string desc = "poisson;lambda=" + format_double(lambda);
      if (!log_pmf_concave(lp)) return Counterexample{"poisson pmf", desc, 0.0, 1.0};
      if (!is_log_concave_discrete(StepSurvival(knots, ls))) return Counterexample{"poisson survival", desc, 0.0, 1.0};
      return std::nullopt;
    }
    // eps_1 + 0.1 eps_2 with P{eps = 1} = 0.01 is not log-concave at 0.1.
    const double p = 0.01;
    const double pts[] = {0.0, 0.1, 1.0, 1.1};
    const double probs[] = {(1 - p) * (1 - p), (1 - p) * p, p * (1 - p), p * p};
    const StepSurvival surv = DiscreteDist::from_probabilities(pts, probs).survival();
    const auto idx = log_concave_hull(surv).source_index();
    const bool dropped = std::find(idx.begin(), idx.end(), std::size_t{1}) == idx.end();
    if (is_log_concave_discrete(surv) || !dropped)
      return Counterexample{"scaled Bernoulli sum", "p=0.01;a=0.1", 1.0, 0.0};
    return std::nullopt;
  });
}

// --- comparison sweeps --------------------------------------------------------------------------

CheckSummary schur_sweep(std::int64_t samples, std::uint64_t seed, Execution exec, std::vector<Counterexample>* out) {
  return sweep("schur", samples, exec, out, [&](std::int64_t i) -> MaybeCe {
    auto rng = instance_rng(seed, 0x5343, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(i % 5) + 2;
    std::vector<double> xs(n);
    for (double& x : xs) x = unit(rng);
    const double t = -1.0 + (static_cast<double>(n) + 1.0) * unit(rng);
    const Comparison c = schur_check(xs, t);
    if (!c.holds) return Counterexample{"schur", "xs=" + join(xs, ' ') + ";t=" + format_double(t), c.lhs, c.rhs};
    return std::nullopt;
  });
}

CheckSummary domination_sweep(DominationFamily family, std::int64_t samples, std::uint64_t seed, Execution exec,
                              std::vector<Counterexample>* out) {
  const auto stream = 0x4400 + static_cast<std::uint64_t>(family);
  return sweep("domination " + to_string(family), samples, exec, out, [&](std::int64_t i) -> MaybeCe {
    auto rng = instance_rng(seed, stream, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const DiscreteDist law = random_centered_law(rng);
    const auto supp = law.support();
    DominationParams par;
    par.a = supp.front() * (1.0 + 0.5 * unit(rng));
    par.b = supp.back() * (1.0 + 0.5 * unit(rng));
    par.sigma2 = law.second_moment() * (1.0 + 0.5 * unit(rng));
    const DominationResult r = convex_domination_check(family, law, par);
    if (!r.holds)
      return Counterexample{to_string(family),
                            law_params(law) + ";a=" + format_double(par.a) + ";b=" + format_double(par.b) +
                                ";sigma2=" + format_double(par.sigma2) + ";f=" + r.worst_function,
                            r.worst_margin, 0.0};
    return std::nullopt;
  });
}

CheckSummary monte_carlo_dominance(std::int64_t trials, std::uint64_t seed, Execution exec,
                                   std::vector<Counterexample>* out, std::vector<std::string>* notes) {
  constexpr std::int64_t kN = 100;
  const std::vector<double> points = {-0.5, -0.25, 0.0, 0.25, 0.5};
  const double xs[] = {2.0, 5.0, 10.0};
  const auto est = monte_carlo_tails(iid_uniform_sampler(points, kN), trials, xs, seed, exec);

  const double b = 0.5;
  double s2 = 0.0;
  for (double v : points) s2 += v * v / static_cast<double>(points.size());
  const auto one_sided = MartingaleConditions::one_sided_variance(b, std::vector<double>(kN, s2));
  const auto range = MartingaleConditions::range(std::vector<double>(kN, 0.5));
  const auto symmetric = MartingaleConditions::symmetric(std::vector<double>(kN, b));
  const auto t11 = one_sided_hull_bound(one_sided);
  const auto t12 = range_hull_bound(range);
  const auto t13 = symmetric_hull_bound(symmetric);

  CheckSummary summary{"monte carlo dominance", 0, 0};
  for (std::size_t j = 0; j < std::size(xs); ++j) {
    const double x = xs[j];
    const double upper = est[j].estimate + 4.0 * est[j].std_error;
    const std::pair<const char*, double> bounds[] = {
        {"one-sided variance", t11(x).value},
        {"one-sided variance poisson", one_sided_poisson_bound(one_sided, x).value},
        {"range", t12(x).value},
        {"range poisson", range_poisson_bound(range, x).value},
        {"symmetric", t13(x).value},
        {"symmetric gaussian", symmetric_gaussian_bound(symmetric, x).value},
        {"hoeffding range", hoeffding_range_bound(kN, 0.5, x)},
        {"hoeffding variance", hoeffding_variance_bound(kN, s2, b, x)},
    };
    for (const auto& [name, bound] : bounds) {
      ++summary.instances;
      if (upper > bound) {
        ++summary.violations;
        if (out && out->size() < detail::kMaxCounterexamples)
          out->push_back({std::string("monte carlo ") + name, "n=100;x=" + format_double(x), upper, bound});
      }
    }
    if (notes)
      notes->push_back(note("monte carlo x=%g: estimate %.6g +- %.2g", x, est[j].estimate, est[j].std_error));
  }
  return summary;
}

// --- suites --------------------------------------------------------------------------------------------

std::int64_t SuiteReport::instances() const {
  std::int64_t s = 0;
  for (const auto& c : checks) s += c.instances;
  return s;
}

std::int64_t SuiteReport::violations() const {
  std::int64_t s = 0;
  for (const auto& c : checks) s += c.violations;
  return s;
}

std::span<const std::string> suite_names() {
  static const std::vector<std::string> names = {"log-concavity",        "fractional-moment", "convex-domination",
                                                 "moment-domination",    "schur",             "symmetric-domination",
                                                 "hoeffding-optimality", "hull-necessity",    "c1",
                                                 "dominance",            "poisson-limit",     "all"};
  return names;
}

namespace {

CheckSummary flag(std::string name, bool ok) { return {std::move(name), 1, ok ? 0 : 1}; }

void run_hoeffding_optimality(SuiteReport& r, const SuiteConfig& cfg) {
  static constexpr std::int64_t kNs[] = {1, 10, 100, 1000, 10000, 100000};
  for (auto [p, z] : {std::pair{0.3, 0.5}, std::pair{0.1, 0.4}}) {
    const OptimalityReport o = hoeffding_optimality_sequence(p, z, kNs);
    const std::string tag = "hoeffding optimality p=" + format_double(p) + " z=" + format_double(z);
    r.checks.push_back(flag(tag + " dominated", o.dominated));
    r.checks.push_back(flag(tag + " gap decreasing", o.gap_decreasing));
    r.checks.push_back(flag(tag + " final gap", o.final_gap < 1e-2));
    r.checks.push_back(flag(tag + " exp(-f) = H", o.matches_h));
    r.notes.push_back(note("hoeffding optimality p=%g z=%g: f = %.9g", p, z, o.f) + note(", gap at n=1e5 = %.3g", o.final_gap));
  }
  r.checks.push_back(mgf_closed_form_sweep(cfg.exec, &r.counterexamples));
}

void run_hull_necessity(SuiteReport& r) {
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  bool formula = true;
  for (int e = -8; e <= 4; ++e) {
    const double s2 = std::pow(10.0, e);
    const double v = hull_necessity_ratio(s2);
    monotone = monotone && v < prev;
    formula = formula && std::fabs(v - (1.0 + s2) / s2) <= 1e-12 * v;
    prev = v;
  }
  const double tiny = hull_necessity_ratio(1e-6);
  r.checks.push_back(flag("hull necessity ratio decreasing", monotone));
  r.checks.push_back(flag("hull necessity ratio formula", formula));
  r.checks.push_back(flag("hull necessity ratio(1e-6) > 1e6", tiny > 1e6));
  r.notes.push_back(note("hull necessity: ratio at sigma2 = 1e-6 is %.17g", tiny));
}

void run_c1(SuiteReport& r, const SuiteConfig& cfg) {
  const C1Result c = c1_search(cfg.exec);
  r.checks.push_back(flag("c1 within [1.55, 1.56]", c.value >= 1.55 && c.value <= 1.56));
  r.checks.push_back(flag("c1 below e^2/2", c.value < const_e2_over_2()));
  r.notes.push_back(note("c1 estimate = %.9f at sigma2 = %.9g, x = %.9g", c.value, c.sigma2, c.x));
}

void run_dominance(SuiteReport& r, const SuiteConfig& cfg) {
  auto* ce = &r.counterexamples;
  for (auto kind : {ConditionKind::range, ConditionKind::one_sided_variance, ConditionKind::symmetric})
    r.checks.push_back(dominance_enumeration(kind, cfg.n, cfg.exec, ce));
  r.checks.push_back(extremal_n1_search(100'000, cfg.seed, cfg.exec, ce));

  const auto range = MartingaleConditions::range(std::vector<double>(static_cast<std::size_t>(cfg.n), 0.5));
  SearchBudget budget;
  budget.seed = cfg.seed;
  budget.restarts = 4;
  double worst = 0.0;
  CheckSummary search{"worst-case search range", 0, 0};
  for (double x : {0.25, 0.5, 0.75, 1.0}) {
    if (x > 0.5 * static_cast<double>(cfg.n)) continue;
    const SearchReport s = worst_case_search(range, x, budget);
    ++search.instances;
    worst = std::max(worst, s.ratio);
    if (s.ratio > 1.0 + 1e-9) {
      ++search.violations;
      ce->push_back({"worst-case search", "range;p=0.5;n=" + std::to_string(cfg.n) + ";x=" + format_double(x),
                     s.best_tail, s.bound_value});
    }
  }
  r.checks.push_back(search);
  r.notes.push_back(note("worst-case search: largest tail / bound ratio %.6f", worst));
  r.checks.push_back(monte_carlo_dominance(1'000'000, cfg.seed, cfg.exec, ce, &r.notes));
}

void run_poisson_limit(SuiteReport& r) {
  static constexpr std::int64_t kMs[] = {100, 1000, 10000};
  for (double lambda : {0.5, 1.0, 5.0})
    for (double x : {0.0, 1.0, 3.0}) {
      const auto gaps = poisson_limit_check(10, lambda, 1.0, kMs, x);
      const bool ok = gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] < 5e-3;
      const std::string tag = "poisson limit lambda=" + format_double(lambda) + " x=" + format_double(x);
      r.checks.push_back(flag(tag, ok));
      if (!ok) r.counterexamples.push_back({"poisson limit", tag, gaps[2], 5e-3});
    }
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown suite '" + name + "'");
  SuiteReport r;
  r.suite = name;
  const bool all = name == "all";
  auto* ce = &r.counterexamples;
  if (all || name == "log-concavity") {
    r.checks.push_back(log_concavity_sweep(1000, cfg.seed, cfg.exec, ce));
    r.checks.push_back(hull_sandwich_sweep(1000, cfg.seed, cfg.exec, ce, &r.notes));
  }
  if (all || name == "fractional-moment") r.checks.push_back(fractional_moment_sweep(cfg.exec, ce));
  if (all || name == "convex-domination") r.checks.push_back(domination_sweep(DominationFamily::convex, 10'000, cfg.seed, cfg.exec, ce));
  if (all || name == "moment-domination") r.checks.push_back(domination_sweep(DominationFamily::moment, 10'000, cfg.seed, cfg.exec, ce));
  if (all || name == "schur") r.checks.push_back(schur_sweep(10'000, cfg.seed, cfg.exec, ce));
  if (all || name == "symmetric-domination")
    r.checks.push_back(domination_sweep(DominationFamily::symmetric, 10'000, cfg.seed, cfg.exec, ce));
  if (all || name == "hoeffding-optimality") run_hoeffding_optimality(r, cfg);
  if (all || name == "hull-necessity") run_hull_necessity(r);
  if (all || name == "c1") run_c1(r, cfg);
  if (all || name == "dominance") run_dominance(r, cfg);
  if (all || name == "poisson-limit") run_poisson_limit(r);
  return r;
}

void write_counterexamples_csv(std::ostream& os, const SuiteReport& report) {
  os << "check,params,lhs,rhs\n";
  for (const auto& c : report.counterexamples)
    os << c.check << ',' << c.params << ',' << format_double(c.lhs) << ',' << format_double(c.rhs) << '\n';
}

}  // namespace tailbound
