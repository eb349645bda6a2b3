#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tailbound/verify.hpp"

using namespace tailbound;

namespace {

// P{M_n >= x} by direct recursion over the node list, in plain probabilities.
double tail_by_recursion(const MartingaleTree& tree, std::size_t node, double sum, double x) {
  const TreeNode& nd = tree.nodes()[node];
  double total = 0.0;
  for (std::size_t j = 0; j < nd.values.size(); ++j) {
    const double s = sum + nd.values[j];
    total += nd.probs[j] * (nd.children.empty() ? (s >= x - 1e-12 ? 1.0 : 0.0)
                                                 : tail_by_recursion(tree, nd.children[j], s, x));
  }
  return total;
}

double expect_pos_sq(const std::vector<double>& pts, const std::vector<double>& probs, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) acc += probs[i] * (pts[i] > t ? (pts[i] - t) * (pts[i] - t) : 0.0);
  return acc;
}

}  // namespace

TEST_CASE("explicit trees") {
  const auto one = MartingaleConditions::one_sided_variance(1.0, {1.0});
  const MartingaleTree t1(one, {TreeNode{{-1.0, 1.0}, {0.5, 0.5}, {}}});
  CHECK(t1.leaf_count() == 2);
  CHECK(exact_tail(t1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(exact_tail(t1, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exact_tail(t1, 1.5) == 0.0);

  const auto sym = MartingaleConditions::symmetric({0.5, 0.5});
  const TreeNode half{{-0.5, 0.5}, {0.5, 0.5}, {}};
  const MartingaleTree t2(sym, {TreeNode{{-0.5, 0.5}, {0.5, 0.5}, {1, 2}}, half, half});
  CHECK(t2.leaf_count() == 4);
  CHECK(exact_tail(t2, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(exact_tail(t2, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(exact_tail(t2, -1.0) == doctest::Approx(1.0).epsilon(1e-15));

  // Invalid trees.
  CHECK_THROWS_AS(MartingaleTree(one, {TreeNode{{-1.0, 1.0}, {0.4, 0.6}, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(MartingaleTree(one, {TreeNode{{-2.0, 2.0}, {0.5, 0.5}, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(MartingaleTree(sym, {TreeNode{{-0.5, 0.5}, {0.5, 0.5}, {}}}), std::invalid_argument);
  CHECK_THROWS_AS(MartingaleTree(sym, {TreeNode{{-0.5, 0.5}, {0.5, 0.5}, {1, 1}}, half}), std::invalid_argument);
  CHECK_THROWS_AS(MartingaleTree(MartingaleConditions::range({0.3}), {TreeNode{{-0.5, 0.5}, {0.5, 0.5}, {}}}),
                  std::invalid_argument);
}

TEST_CASE("two-point trees") {
  const auto cond = MartingaleConditions::range({0.3, 0.6, 0.5});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<NodeParams> ps(7);
    for (auto& p : ps) p = {u(rng) < 0.15 ? 0.0 : u(rng), u(rng)};
    const auto tree = MartingaleTree::two_point(cond, ps);
    for (double x : {-1.0, -0.2, 0.0, 0.3, 0.8, 1.2, 2.0})
      CHECK(exact_tail(tree, x) == doctest::Approx(tail_by_recursion(tree, 0, 0.0, x)).epsilon(1e-12));
  }

  const auto law = node_law(cond, 1, {1.0, 1.0});
  CHECK(law.v_lo() == doctest::Approx(-0.6).epsilon(1e-15));
  CHECK(law.v_hi() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(is_degenerate(cond, 0, {0.0, 0.5}));
  CHECK_THROWS_AS(node_law(cond, 0, {0.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(MartingaleTree::two_point(cond, std::vector<NodeParams>(3, {1.0, 1.0})), std::invalid_argument);

  // 1001 x 1001 leaves.
  TreeNode wide;
  for (int k = -500; k <= 500; ++k) {
    wide.values.push_back(k / 500.0);
    wide.probs.push_back(1.0 / 1001);
  }
  std::vector<TreeNode> nodes(1002, wide);
  for (std::size_t j = 0; j < 1001; ++j) nodes[0].children.push_back(j + 1);
  const MartingaleTree big(MartingaleConditions::symmetric({1.0, 1.0}), nodes);
  CHECK(big.leaf_count() == 1001u * 1001u);
  CHECK_THROWS_AS(big.paths(), ResourceError);
}

TEST_CASE("worst-case search") {
  const auto one = MartingaleConditions::one_sided_variance(1.0, {1.0});
  const auto r1 = worst_case_search(one, 1.0);
  CHECK(r1.best_tail == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r1.best_tail == doctest::Approx(exact_n1(VarianceCase{1.0, 1.0}, 1.0)).epsilon(1e-12));

  const auto half = MartingaleConditions::range({0.5});
  CHECK(worst_case_search(half, 0.5).best_tail == doctest::Approx(0.5).epsilon(1e-12));

  const auto two = MartingaleConditions::range({0.5, 0.5});
  SearchBudget budget;
  budget.restarts = 4;
  for (double x : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const auto r = worst_case_search(two, x, budget);
    CHECK(r.ratio < 1.0);
    CHECK(r.best_tail <= r.bound_value);
    CHECK(exact_tail(MartingaleTree::two_point(two, r.argmax), x) == doctest::Approx(r.best_tail).epsilon(1e-12));
  }
}

TEST_CASE("n = 1 constant") {
  CHECK(c1_ratio(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // The ratio written out: sigma2/(x^2+sigma2) over exp(-(x+sigma2)/(1+sigma2) log((1+sigma2)/sigma2)).
  for (double s2 : {0.01, 0.3, 2.0})
    for (double x : {0.1, 0.5, 1.0}) {
      const double direct = s2 / (x * x + s2) / std::exp(-(x + s2) / (1 + s2) * std::log((1 + s2) / s2));
      CHECK(c1_ratio(s2, x) == doctest::Approx(direct).epsilon(1e-13));
    }
  double brute = 0.0;
  for (int i = 0; i <= 2000; ++i)
    for (int j = 1; j <= 500; ++j) brute = std::max(brute, c1_ratio(std::pow(10.0, -4.0 + 8.0 * i / 2000), j / 500.0));
  const auto c = c1_search(Execution::serial);
  CHECK(c.value >= brute - 1e-12);
  CHECK(c.value == doctest::Approx(brute).epsilon(1e-4));
  CHECK(std::fabs(c.value - 1.555884) <= 2e-3);
  CHECK(c1_ratio(c.sigma2, c.x) == doctest::Approx(c.value).epsilon(1e-14));
}

TEST_CASE("schur comparison") {
  const double xs[] = {0.1, 0.9};
  const auto r = schur_check(xs, 0.0);
  // theta(x, 1) takes -x with mass 1/(1+x) and 1 with mass x/(1+x).
  std::vector<double> pts;
  std::vector<double> probs;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      pts.push_back((a ? 1.0 : -0.1) + (b ? 1.0 : -0.9));
      probs.push_back((a ? 0.1 / 1.1 : 1 / 1.1) * (b ? 0.9 / 1.9 : 1 / 1.9));
    }
  CHECK(r.lhs == doctest::Approx(expect_pos_sq(pts, probs, 0.0)).epsilon(1e-14));
  std::vector<double> sp = {-1.0, 0.5, 2.0};
  std::vector<double> sq = {(1 / 1.5) * (1 / 1.5), 2 * (1 / 1.5) * (0.5 / 1.5), (0.5 / 1.5) * (0.5 / 1.5)};
  CHECK(r.rhs == doctest::Approx(expect_pos_sq(sp, sq, 0.0)).epsilon(1e-14));
  CHECK(r.holds);
  CHECK(r.lhs < r.rhs);

  const double same[] = {0.4, 0.4, 0.4};
  const auto e = schur_check(same, 0.3);
  CHECK(e.lhs == doctest::Approx(e.rhs).epsilon(1e-14));
  CHECK_THROWS_AS(schur_check(std::vector<double>{-0.1}, 0.0), std::domain_error);
}

TEST_CASE("convex domination") {
  const double pts[] = {-0.5, 0.0, 0.5};
  const double probs[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto x = DiscreteDist::from_probabilities(pts, probs);
  const auto r = convex_domination_check(DominationFamily::convex, x, {-0.5, 0.5, 0.0});
  CHECK(r.holds);
  CHECK(r.worst_margin <= 1e-15);
  // f = (z)_+ gives 1/6 against 1/4.
  CHECK(x.expect([](double z) { return z > 0 ? z : 0.0; }) == doctest::Approx(1.0 / 6).epsilon(1e-15));

  const auto atom = two_point_from_range(-0.5, 0.5).to_discrete();
  CHECK(std::fabs(convex_domination_check(DominationFamily::convex, atom, {-0.5, 0.5, 0.0}).worst_margin) <= 1e-15);
  const auto m = two_point_from_variance(0.3, 1.0).to_discrete();
  CHECK(std::fabs(convex_domination_check(DominationFamily::moment, m, {0.0, 1.0, 0.3}).worst_margin) <= 1e-12);
  CHECK(convex_domination_check(DominationFamily::symmetric, x, {0.0, 0.5, 0.2}).holds);

  CHECK_THROWS_AS(convex_domination_check(DominationFamily::convex, x, {-0.25, 0.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(convex_domination_check(DominationFamily::moment, x, {0.0, 0.5, 0.1}), std::domain_error);
  const double off[] = {0.0, 1.0};
  const double half[] = {0.5, 0.5};
  CHECK_THROWS_AS(convex_domination_check(DominationFamily::convex, DiscreteDist::from_probabilities(off, half),
                                          {-1.0, 1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("log-concave sequences") {
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK(convolution_log_concavity_check(ones, ones));
  CHECK(is_log_concave_sequence(std::vector<double>{1, 2, 3, 2, 1}));
  CHECK_FALSE(is_log_concave_sequence(std::vector<double>{1, 0.1, 1}));
  const std::vector<double> bern = {0.7, 0.3};
  CHECK(convolution_log_concavity_check(bern, bern));
  CHECK_THROWS_AS(convolution_log_concavity_check(std::vector<double>{1, 0.1, 1}, ones), std::domain_error);
  CHECK_THROWS_AS(convolution_log_concavity_check(std::vector<double>{1, 0, 1}, ones), std::domain_error);
  CHECK_THROWS_AS(convolution_log_concavity_check(std::vector<double>{-1, 1}, ones), std::domain_error);
}

TEST_CASE("hoeffding optimality") {
  const std::int64_t ns[] = {1, 10, 100, 1000, 10000, 100000};
  const auto r = hoeffding_optimality_sequence(0.3, 0.5, ns);
  CHECK(r.f == doctest::Approx(0.5 * std::log(5.0 / 3) + 0.5 * std::log(5.0 / 7)).epsilon(1e-14));
  CHECK(r.f == doctest::Approx(0.087176).epsilon(1e-5));
  CHECK(r.hoeffding == doctest::Approx(0.916515).epsilon(1e-6));
  CHECK(r.g[0] == doctest::Approx(std::log(0.3)).epsilon(1e-14));
  CHECK(r.dominated);
  CHECK(r.gap_decreasing);
  CHECK(r.final_gap < 1e-2);
  CHECK(r.matches_h);
  const std::int64_t big[] = {100};
  CHECK(hoeffding_optimality_sequence(0.3, 0.3 + 1e-9, big).f < 1e-15);
  CHECK_THROWS_AS(hoeffding_optimality_sequence(0.5, 0.3, big), std::domain_error);
}

TEST_CASE("hull necessity and the Poisson limit") {
  CHECK(hull_necessity_ratio(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(hull_necessity_ratio(1e-6) == doctest::Approx(1e6 + 1).epsilon(1e-12));
  CHECK(hull_necessity_ratio(1e-6) > 1e6);
  CHECK(hull_necessity_ratio(0.5) > hull_necessity_ratio(0.6));

  const std::int64_t ms[] = {100, 1000, 10000};
  for (double lambda : {0.5, 1.0, 5.0})
    for (double x : {0.0, 1.0, 3.0}) {
      const auto g = poisson_limit_check(10, lambda, 1.0, ms, x);
      CHECK(g[0] > g[1]);
      CHECK(g[1] > g[2]);
      CHECK(g[2] < 5e-3);
    }
}

TEST_CASE("monte carlo") {
  const PathSampler zero = [](std::mt19937_64&) { return 0.0; };
  CHECK(monte_carlo_tail(zero, 10000, 0.5, 1).estimate == 0.0);
  CHECK(monte_carlo_tail(zero, 10000, 0.0, 1).estimate == 1.0);
  CHECK_THROWS_AS(monte_carlo_tail(zero, 100, 0.5, 1), std::domain_error);

  // P{S_100 >= 0} for fair +-1 steps is P{Bin(100, 1/2) >= 50}.
  long double exact = 0.0L;
  for (int k = 50; k <= 100; ++k) {
    long double c = 1.0L;
    for (int i = 0; i < k; ++i) c = c * (100 - i) / (i + 1);
    exact += c * std::pow(0.5L, 100);
  }
  CHECK(static_cast<double>(exact) == doctest::Approx(0.5398).epsilon(1e-4));
  const auto est = monte_carlo_tail(iid_uniform_sampler({-1.0, 1.0}, 100), 100000, 0.0, 3);
  CHECK(std::fabs(est.estimate - static_cast<double>(exact)) <= 3 * est.std_error);
}

TEST_CASE("serial and parallel runs agree") {
  omp_set_num_threads(4);
  auto same = [](const CheckSummary& a, const CheckSummary& b) {
    return a.name == b.name && a.instances == b.instances && a.violations == b.violations;
  };
  CHECK(same(schur_sweep(500, 5, Execution::serial), schur_sweep(500, 5, Execution::parallel)));
  for (auto f : {DominationFamily::convex, DominationFamily::moment, DominationFamily::symmetric})
    CHECK(same(domination_sweep(f, 500, 5, Execution::serial), domination_sweep(f, 500, 5, Execution::parallel)));
  CHECK(same(extremal_n1_search(2000, 5, Execution::serial), extremal_n1_search(2000, 5, Execution::parallel)));

  std::vector<std::string> ns;
  std::vector<std::string> np;
  hull_sandwich_sweep(300, 5, Execution::serial, nullptr, &ns);
  hull_sandwich_sweep(300, 5, Execution::parallel, nullptr, &np);
  CHECK(ns == np);

  const auto sampler = iid_uniform_sampler({-0.5, -0.25, 0.0, 0.25, 0.5}, 50);
  const double xs[] = {1.0, 3.0};
  const auto a = monte_carlo_tails(sampler, 100000, xs, 9, Execution::serial);
  const auto b = monte_carlo_tails(sampler, 100000, xs, 9, Execution::parallel);
  for (std::size_t j = 0; j < 2; ++j) CHECK(a[j].estimate == b[j].estimate);

  const auto cs = c1_search(Execution::serial);
  const auto cp = c1_search(Execution::parallel);
  CHECK(cs.value == cp.value);
  CHECK(cs.sigma2 == cp.sigma2);
}

TEST_CASE("property sweeps find no violations") {
  std::vector<Counterexample> ce;
  CHECK(schur_sweep(2000, 11, Execution::parallel, &ce).violations == 0);
  for (auto f : {DominationFamily::convex, DominationFamily::moment, DominationFamily::symmetric})
    CHECK(domination_sweep(f, 2000, 11, Execution::parallel, &ce).violations == 0);
  CHECK(log_concavity_sweep(300, 11, Execution::parallel, &ce).violations == 0);
  CHECK(hull_sandwich_sweep(300, 11, Execution::parallel, &ce).violations == 0);
  CHECK(extremal_n1_search(5000, 11, Execution::parallel, &ce).violations == 0);
  for (auto kind : {ConditionKind::range, ConditionKind::one_sided_variance, ConditionKind::symmetric})
    CHECK(dominance_enumeration(kind, 1, Execution::parallel, &ce).violations == 0);
  CHECK(mgf_closed_form_sweep(Execution::parallel, &ce).violations == 0);
  CHECK(ce.empty());
}

TEST_CASE("suites") {
  CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
  CHECK(suite_names().back() == "all");
  const auto r = run_suite("hull-necessity");
  CHECK(r.passed());
  CHECK(r.instances() == 3);
  CHECK(run_suite("poisson-limit").passed());

  SuiteReport fake;
  fake.counterexamples.push_back({"x", "a=1 b=2", 0.5, 0.25});
  std::ostringstream os;
  write_counterexamples_csv(os, fake);
  CHECK(os.str() == "check,params,lhs,rhs\nx,a=1 b=2,0.5,0.25\n");
}

TEST_CASE("instance generators are independent of order") {
  auto a = instance_rng(1, 2, 3);
  auto b = instance_rng(1, 2, 3);
  auto c = instance_rng(1, 2, 4);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  for (int i = 0; i < 200; ++i) {
    auto rng = instance_rng(7, 1, static_cast<std::uint64_t>(i));
    const auto law = random_centered_law(rng);
    CHECK(law.size() >= 1);
    CHECK(law.size() <= 7);
    CHECK(std::fabs(law.mean()) <= 1e-12);
  }
}
