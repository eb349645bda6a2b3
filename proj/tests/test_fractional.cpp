#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/fractional.hpp"

using namespace tailbound;

namespace {

// Composite Simpson rule of s (z - t)^(s-1) B(z) over each constant piece of B.
double quadrature_moment(const StepSurvival& surv, double s, double t) {
  const auto xs = surv.knots();
  double total = 0.0;
  auto piece = [&](double a, double b, double value) {
    if (b <= a) return;
    constexpr int kSteps = 2000;
    const double h = (b - a) / kSteps;
    auto f = [&](double z) { return s * std::pow(z - t, s - 1.0) * value; };
    double acc = f(a) + f(b);
    for (int i = 1; i < kSteps; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    total += acc * h / 3.0;
  };
  piece(t, xs.front(), 1.0);
  for (std::size_t i = 1; i < xs.size(); ++i) piece(std::max(t, xs[i - 1]), xs[i], surv.values()[i]);
  return total;
}

DiscreteDist random_law(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_real_distribution<double> pt(-3.0, 3.0);
  std::exponential_distribution<double> e(1.0);
  const int k = count(rng);
  std::vector<double> pts;
  std::vector<double> w;
  for (int i = 0; i < k; ++i) {
    pts.push_back(pt(rng));
    w.push_back(e(rng));
  }
  const double t = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= t;
  return DiscreteDist::from_probabilities(pts, w);
}

}  // namespace

TEST_CASE("fractional constant") {
  const double e = std::numbers::e;
  CHECK(fractional_constant(1.0) == doctest::Approx(e).epsilon(1e-15));
  CHECK(fractional_constant(2.0) == doctest::Approx(e * e / 2).epsilon(1e-15));
  CHECK(fractional_constant(3.0) == doctest::Approx(2 * e * e * e / 9).epsilon(1e-15));
  CHECK(fractional_constant(2.5) * 0.1 == doctest::Approx(0.40968).epsilon(1e-4));
  CHECK_THROWS(fractional_constant(0.0));
}

TEST_CASE("step integral moment") {
  const auto fair = TwoPointDist(-1.0, 1.0, 0.5).to_discrete();
  const auto s = fair.survival();
  CHECK(step_integral_moment(s, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(step_integral_moment(s, 2.0, -1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(step_integral_moment(s, 2.0, 1.0) == 0.0);
  CHECK(step_integral_moment(s, 1.5, 3.0) == 0.0);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> tt(-5.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto law = random_law(rng);
    const auto surv = law.survival();
    for (double order : {0.5, 1.0, 2.0, 2.5, 3.0}) {
      const double t = tt(rng);
      // E (X - t)_+^s is the same integral written as an expectation.
      const double direct = law.expect([&](double z) { return z > t ? std::pow(z - t, order) : 0.0; });
      const double got = step_integral_moment(surv, order, t);
      CHECK(got == doctest::Approx(direct).epsilon(1e-12));
      if (order >= 1.0) {
        const double q = quadrature_moment(surv, order, t);
        INFO("order " << order << " t " << t << " rel " << (got - q) / q);
        CHECK(got == doctest::Approx(q).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("infimum over t") {
  const auto fair = TwoPointDist(-1.0, 1.0, 0.5).to_discrete().survival();
  CHECK(lhs_inf(fair, 1.0, 1.0).value == doctest::Approx(0.5).epsilon(1e-12));
  const auto two = lhs_inf(fair, 2.0, 1.0);
  CHECK(two.value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(two.argmin == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(lhs_inf(fair, 2.0, -1.0).value == 1.0);
  CHECK(lhs_inf(fair, 2.0, 1.5).value == 0.0);

  const auto binom = iid_sum_survival(two_point_from_range(-0.3, 0.7), 10);
  const double x = binom.knots()[binom.size() - 3];
  const auto hull = log_concave_hull(binom);
  CHECK(lhs_inf(binom, 2.0, x).value <= rhs_bound(hull, 2.0, x) + 1e-9);
  CHECK(rhs_bound(hull, 1.0, x) == doctest::Approx(std::numbers::e * hull(x)).epsilon(1e-15));

  // Against a dense independent grid.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto surv = random_law(rng).survival();
    if (surv.size() < 2) continue;
    const auto xs = surv.knots();
    const double xq = 0.5 * (xs[0] + xs[1]);
    for (double order : {1.0, 2.0, 3.0}) {
      const double span = std::max(1.0, xs.back() - xs.front());
      const double lo = xq - 4.0 * span;
      double brute = 1e300;
      constexpr int kGrid = 200000;
      for (int i = 0; i < kGrid; ++i) {
        const double t = lo + (xq - lo) * i / kGrid;
        brute = std::min(brute, step_integral_moment(surv, order, t) / std::pow(xq - t, order));
      }
      brute = std::min(brute, 1.0);  // the t -> -inf limit
      const double got = lhs_inf(surv, order, xq).value;
      CHECK(got <= brute + 1e-12);
      CHECK(got == doctest::Approx(brute).epsilon(1e-6));
    }
  }
}

TEST_CASE("infimum is nonincreasing in x") {
  const auto surv = iid_sum_survival(two_point_from_variance(0.5, 1.0), 12);
  const auto xs = surv.knots();
  for (double order : {1.0, 2.0, 2.5, 3.0}) {
    double prev = 1.0;
    for (double x = xs.front() + 0.05; x <= xs.back(); x += 0.05) {
      const double v = lhs_inf(surv, order, x).value;
      CHECK(v <= prev + 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("tangent witness reaches the hull bound on log-linear survivals") {
  // B(z) = exp(-beta z) sampled on a grid of spacing d; the witness objective
  // converges to the bound as d -> 0, so extrapolate over d, d/2, d/4.
  const double beta = 1.3;
  const double x = 6.0;
  for (double order : {1.0, 2.0, 2.5, 3.0}) {
    auto witness = [&](double d) {
      const auto k = static_cast<int>(std::lround(60.0 / d));
      std::vector<double> knots(k + 1);
      std::vector<double> lv(k + 1);
      for (int i = 0; i <= k; ++i) {
        knots[i] = i * d;
        lv[i] = -beta * i * d;
      }
      const StepSurvival surv(knots, lv);
      const auto hull = log_concave_hull(surv);
      CHECK(hull.left_slope(x) == doctest::Approx(beta).epsilon(1e-9));
      return tangent_witness(surv, hull, order, x).value;
    };
    const double d = 0.01;
    const double f1 = witness(d);
    const double f2 = witness(d / 2);
    const double f4 = witness(d / 4);
    const double r1 = 2 * f2 - f1;
    const double r2 = 2 * f4 - f2;
    const double extrapolated = (4 * r2 - r1) / 3;
    const double rhs = fractional_constant(order) * std::exp(-beta * x);
    CHECK(std::fabs(extrapolated - rhs) <= 1e-6 * rhs);
    CHECK(f4 <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("fractional moment bound") {
  const auto fair = TwoPointDist(-1.0, 1.0, 0.5).to_discrete();
  const auto r = fractional_moment_bound(fair, 2.0, 1.0);
  CHECK(r.infimum == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.hull_form == doctest::Approx(std::exp(2.0) / 4).epsilon(1e-14));
  CHECK(fractional_moment_bound(fair, 2.0, 2.0).infimum == 0.0);
  CHECK_THROWS_AS(fractional_moment_bound(fair, 1.5, 1.0), std::domain_error);
}
