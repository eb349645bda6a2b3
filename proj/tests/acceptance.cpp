// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/fractional.hpp"
#include "tailbound/hull.hpp"
#include "tailbound/verify.hpp"

using namespace tailbound;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool clean(const CheckSummary& s) { return s.violations == 0 && s.instances > 0; }

Outcome c1_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport r = run_suite("c1");
  const C1Result c = c1_search();
  const double secs = seconds_since(t0);
  const double diff = std::fabs(c.value - 1.555884);
  return {r.passed() && diff <= 2e-3 && secs < 10.0,
          fmt("c1 = %.9f, |c1 - 1.555884| = %.2e (tol 2e-3), %.2f s for suite + search (limit 10 s)", c.value, diff,
              secs)};
}

Outcome constant_identities() {
  struct Row {
    double value;
    double expected;
    double ceiling;
    double tol;
  };
  const Row rows[] = {{const_e(), 2.718281828, 2.72, 1e-9},
                      {const_e2_over_2(), 3.694528049, 3.7, 1e-9},
                      {const_2e3_over_9(), 4.463372930, 4.47, 1e-9},
                      {const_e3_over_2(), 10.042768, 10.1, 1e-6}};
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    ok = ok && std::fabs(r.value - r.expected) <= r.tol && r.value <= r.ceiling;
    worst = std::max(worst, std::fabs(r.value - r.expected));
  }
  double gap = 0.0;
  const double consts[] = {const_e(), const_e2_over_2(), const_2e3_over_9()};
  for (int s = 1; s <= 3; ++s) gap = std::max(gap, std::fabs(fractional_constant(s) - consts[s - 1]));
  ok = ok && gap <= 1e-12;
  return {ok, fmt("largest deviation from the decimal values %.2e (tol 1e-9, 1e-6 for e^3/2); "
                  "e^s s^-s Gamma(s+1) gap %.2e (tol 1e-12); ceilings 2.72, 3.7, 4.47, 10.1 respected",
                  worst, gap)};
}

Outcome fractional_moment() {
  const auto t0 = std::chrono::steady_clock::now();
  const CheckSummary s = fractional_moment_sweep(Execution::parallel);
  const double secs = seconds_since(t0);
  return {clean(s) && s.instances >= 200 && secs < 60.0,
          fmt("%.0f binomial survivals, s in {1, 2, 2.5, 3}, knots and midpoints: %.0f violations of "
              "lhs <= rhs + 1e-9, %.2f s (limit 60 s)",
              static_cast<double>(s.instances), static_cast<double>(s.violations), secs)};
}

Outcome mgf_equality() {
  const CheckSummary s = mgf_closed_form_sweep(Execution::parallel);
  return {clean(s), fmt("%.0f (n, sigma2) pairs x 21 x values: %.0f disagreements beyond 1e-8 relative",
                        static_cast<double>(s.instances), static_cast<double>(s.violations))};
}

Outcome exhaustive_dominance() {
  const CheckSummary r = dominance_enumeration(ConditionKind::range, 2, Execution::parallel);
  const CheckSummary v = dominance_enumeration(ConditionKind::one_sided_variance, 2, Execution::parallel);
  const CheckSummary r1 = dominance_enumeration(ConditionKind::range, 1, Execution::parallel);
  const CheckSummary v1 = dominance_enumeration(ConditionKind::one_sided_variance, 1, Execution::parallel);
  const bool ok = clean(r) && clean(v) && clean(r1) && clean(v1) && r.instances >= 10'000 && v.instances >= 10'000;
  return {ok, fmt("n = 2: %.0f range trees, %.0f one-sided variance trees; violations of tail <= bound + 1e-12: %.0f "
                  "(n = 1 included: %.0f)",
                  static_cast<double>(r.instances), static_cast<double>(v.instances),
                  static_cast<double>(r.violations + v.violations),
                  static_cast<double>(r1.violations + v1.violations))};
}

Outcome extremal_n1() {
  double worst = 0.0;
  for (double a : {-2.0, -1.0, -0.3})
    for (double b : {0.2, 1.0, 3.0})
      for (int k = 1; k <= 20; ++k) {
        const double x = b * k / 20.0;
        const TwoPointDist law = two_point_from_range(a, x);
        const double tail = law.to_discrete().survival()(x);
        worst = std::max(worst, std::fabs(tail - exact_n1(RangeCase{a, b}, x)));
      }
  for (double s2 : {0.05, 1.0, 4.0})
    for (double b : {0.2, 1.0, 3.0})
      for (int k = 1; k <= 20; ++k) {
        const double x = b * k / 20.0;
        const TwoPointDist law = two_point_from_variance(s2, x);
        const double tail = law.to_discrete().survival()(x);
        worst = std::max(worst, std::fabs(tail - exact_n1(VarianceCase{s2, b}, x)));
        worst = std::max(worst, std::fabs(law.variance() - s2) / s2);
      }
  const CheckSummary s = extremal_n1_search(100'000, 7, Execution::parallel);
  return {worst <= 1e-12 && clean(s),
          fmt("two-point attainers match the closed forms within %.2e (tol 1e-12); %.0f random laws, %.0f exceed them",
              worst, static_cast<double>(s.instances), static_cast<double>(s.violations))};
}

Outcome hull_sandwich() {
  std::vector<std::string> notes;
  const CheckSummary h = hull_sandwich_sweep(1000, 7, Execution::parallel, nullptr, &notes);
  const CheckSummary l = log_concavity_sweep(1000, 7, Execution::parallel);
  const double p = 0.01;
  const double pts[] = {0.0, 0.1, 1.0, 1.1};
  const double probs[] = {(1 - p) * (1 - p), (1 - p) * p, p * (1 - p), p * p};
  const bool counterexample = !is_log_concave_discrete(DiscreteDist::from_probabilities(pts, probs).survival());
  return {clean(h) && clean(l) && counterexample,
          fmt("%.0f random survivals (B <= B° <= B◇ where log-concave, convexity, idempotence): %.0f violations; "
              "%.0f log-concavity instances: %.0f violations; scaled Bernoulli sum flagged: ",
              static_cast<double>(h.instances), static_cast<double>(h.violations), static_cast<double>(l.instances),
              static_cast<double>(l.violations)) +
              (counterexample ? "yes" : "no")};
}

Outcome poisson_limit() {
  const std::int64_t ms[] = {100, 1000, 10000};
  bool ok = true;
  double worst = 0.0;
  for (double lambda : {0.5, 1.0, 5.0})
    for (double x : {0.0, 1.0, 3.0}) {
      const auto g = poisson_limit_check(10, lambda, 1.0, ms, x);
      ok = ok && g[0] > g[1] && g[1] > g[2] && g[2] < 5e-3;
      worst = std::max(worst, g[2]);
    }
  return {ok, fmt("gaps decrease over m = 1e2, 1e3, 1e4; largest gap at m = 1e4 is %.2e (tol 5e-3)", worst)};
}

Outcome hoeffding_optimality() {
  const std::int64_t ns[] = {1, 10, 100, 1000, 10000, 100000};
  bool ok = true;
  std::string detail;
  for (auto [p, z] : {std::pair{0.3, 0.5}, std::pair{0.1, 0.4}}) {
    const OptimalityReport r = hoeffding_optimality_sequence(p, z, ns);
    ok = ok && r.dominated && r.final_gap < 1e-2 && r.matches_h;
    detail += fmt("(p, z) = (%g, %g): f = %.6f, gap at n = 1e5 %.2e; ", p, z, r.f, r.final_gap);
  }
  return {ok, detail + "g_n <= -f, gap < 1e-2, |exp(-f) - H| <= 1e-12"};
}

Outcome comparison_runs() {
  const CheckSummary runs[] = {
      schur_sweep(10'000, 7, Execution::parallel),
      domination_sweep(DominationFamily::convex, 10'000, 7, Execution::parallel),
      domination_sweep(DominationFamily::moment, 10'000, 7, Execution::parallel),
      domination_sweep(DominationFamily::symmetric, 10'000, 7, Execution::parallel),
  };
  bool ok = true;
  std::int64_t total = 0;
  std::int64_t bad = 0;
  for (const auto& s : runs) {
    ok = ok && clean(s) && s.instances >= 10'000;
    total += s.instances;
    bad += s.violations;
  }
  return {ok, fmt("schur, convex, moment and symmetric domination: %.0f instances, %.0f violations at 1e-10 slack",
                  static_cast<double>(total), static_cast<double>(bad))};
}

Outcome hull_necessity() {
  const double r = hull_necessity_ratio(1e-6);
  return {r > 1e6, fmt("P{0 >= 0} / P{eps >= 0} at sigma2 = 1e-6 is %.6f (needs > 1e6)", r)};
}

Outcome monte_carlo() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> notes;
  const CheckSummary s = monte_carlo_dominance(1'000'000, 7, Execution::parallel, nullptr, &notes);
  const double secs = seconds_since(t0);
  std::string est;
  for (const auto& n : notes) est += n + "; ";
  return {clean(s) && secs < 60.0,
          est + fmt("%.0f bound comparisons, %.0f with estimate + 4 s.e. above the bound, %.2f s (limit 60 s)",
                    static_cast<double>(s.instances), static_cast<double>(s.violations), secs)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"n = 1 constant", c1_reproduction},
      {"constant identities", constant_identities},
      {"fractional-moment inequality", fractional_moment},
      {"moment generating bound equality", mgf_equality},
      {"exhaustive dominance", exhaustive_dominance},
      {"n = 1 extremal values", extremal_n1},
      {"hull sandwich and log-concavity", hull_sandwich},
      {"Poisson limit", poisson_limit},
      {"Hoeffding optimality", hoeffding_optimality},
      {"comparison inequalities", comparison_runs},
      {"hull necessity", hull_necessity},
      {"Monte Carlo dominance", monte_carlo},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o{false, ""};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
