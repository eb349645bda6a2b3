#include "tailbound/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/fractional.hpp"
#include "tailbound/hull.hpp"
#include "tailbound/verify.hpp"

namespace tailbound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string format = "csv";
  std::uint64_t seed = 7;
  bool clamp = false;
  std::string out_path;

  std::string condition;
  std::int64_t n = 0;
  std::optional<double> b;
  std::optional<double> a;
  std::optional<double> p;
  std::optional<double> sigma2;
  std::vector<double> bs;
  std::vector<double> ps;
  std::vector<double> sigma2s;

  std::vector<double> xs;
  std::optional<double> x_from;
  std::optional<double> x_to;
  std::optional<double> x_step;

  std::vector<double> points;
  std::vector<double> probs;
  std::vector<double> s_values = {1.0, 2.0, 2.5, 3.0};

  std::string suite;
  bool serial = false;

  double mean = kNaN;
  double delta = kNaN;
};

/// A table with named columns; doubles printed with 17 significant digits in
/// CSV and as shortest round-trip numbers in JSON (NaN becomes null).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::variant<double, std::string, bool>>> rows;

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      nlohmann::ordered_json ordered = nlohmann::ordered_json::array();
      for (const auto& row : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < columns.size(); ++i)
          std::visit(
              [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                  if (std::isnan(v))
                    obj[columns[i]] = nullptr;
                  else if (std::isinf(v))
                    obj[columns[i]] = v > 0 ? "inf" : "-inf";
                  else
                    obj[columns[i]] = v;
                } else {
                  obj[columns[i]] = v;
                }
              },
              row[i]);
        ordered.push_back(std::move(obj));
      }
      os << ordered.dump(2) << '\n';
      return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>)
                os << format_double(v);
              else if constexpr (std::is_same_v<T, bool>)
                os << (v ? "true" : "false");
              else
                os << v;
            },
            row[i]);
      }
      os << '\n';
    }
  }
};

// --- parameter assembly ----------------------------------------------------------

std::vector<double> per_step(const std::vector<double>& list, const std::optional<double>& scalar, std::int64_t n,
                             const char* name) {
  if (!list.empty()) {
    if (n != 0 && static_cast<std::int64_t>(list.size()) != n)
      throw UsageError(std::string("--") + name + "s has " + std::to_string(list.size()) + " entries but --n is " +
                       std::to_string(n));
    return list;
  }
  if (!scalar) throw UsageError(std::string("need --") + name + " or --" + name + "s");
  if (n < 1) throw UsageError(std::string("--") + name + " needs --n >= 1");
  return std::vector<double>(static_cast<std::size_t>(n), *scalar);
}

MartingaleConditions conditions_from(const RunConfig& c) {
  if (c.condition == "variance") {
    if (!c.b) throw UsageError("--condition variance needs --b");
    return MartingaleConditions::one_sided_variance(*c.b, per_step(c.sigma2s, c.sigma2, c.n, "sigma2"));
  }
  if (c.condition == "range") return MartingaleConditions::range(per_step(c.ps, c.p, c.n, "p"));
  if (c.condition == "symmetric") {
    const std::optional<double> b = c.a ? c.a : c.b;
    auto bs = per_step(c.bs, b, c.n, "b");
    if (!c.sigma2s.empty()) {
      if (c.sigma2s.size() != bs.size()) throw UsageError("--sigma2s and the b_k list differ in length");
      return MartingaleConditions::per_step(std::move(bs), c.sigma2s);
    }
    return MartingaleConditions::symmetric(std::move(bs));
  }
  throw UsageError("--condition must be variance, range or symmetric");
}

std::vector<double> x_values(const RunConfig& c, std::ostream& err) {
  std::vector<double> xs = c.xs;
  if (c.x_from || c.x_to || c.x_step) {
    if (!c.x_from || !c.x_to || !c.x_step) throw UsageError("--x-from, --x-to and --x-step go together");
    const double lo = *c.x_from;
    const double hi = *c.x_to;
    const double step = *c.x_step;
    if (!(step > 0.0) || !(hi >= lo)) throw UsageError("need --x-step > 0 and --x-to >= --x-from");
    const double steps = (hi - lo) / step;
    const double whole = std::round(steps);
    const bool divides = std::fabs(steps - whole) <= 1e-9 * std::max(1.0, steps);
    const auto count = static_cast<std::int64_t>(divides ? whole : std::floor(steps));
    for (std::int64_t i = 0; i <= count; ++i) xs.push_back(i == count && divides ? hi : lo + step * static_cast<double>(i));
    if (!divides) {
      err << "warning: --x-step does not divide the range; last point clamped to " << format_double(hi) << '\n';
      xs.push_back(hi);
    }
  }
  return xs;
}

DiscreteDist distribution_from(const RunConfig& c) {
  if (c.points.empty()) throw UsageError("need a distribution: --points/--probs, --p, or --sigma2 with --b");
  if (c.points.size() != c.probs.size()) throw UsageError("--points and --probs differ in length");
  return DiscreteDist::from_probabilities(c.points, c.probs);
}

StepSurvival survival_from(const RunConfig& c) {
  // Two-point atom plus n: the binomial-tail path keeps tiny survivals accurate.
  if (c.p && c.sigma2) throw UsageError("give either --p or --sigma2 with --b, not both");
  if (c.points.empty() && (c.p || c.sigma2)) {
    if (c.sigma2 && !c.b) throw UsageError("--sigma2 needs --b");
    const TwoPointDist atom = c.p ? two_point_from_range(-*c.p, 1.0 - *c.p) : two_point_from_variance(*c.sigma2, *c.b);
    if (c.n < 0) throw UsageError("--n must be positive");
    return iid_sum_survival(atom, c.n == 0 ? 1 : c.n);
  }
  return distribution_from(c).survival();
}

// --- subcommands -------------------------------------------------------------------------

int run_bound(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const MartingaleConditions cond = conditions_from(c);
  const auto xs = x_values(c, err);
  if (xs.empty()) throw UsageError("need --x or an x range");
  const BernoulliSumBound bound = c.condition == "variance" ? one_sided_hull_bound(cond)
                                  : c.condition == "range"  ? range_hull_bound(cond)
                                                            : symmetric_hull_bound(cond);
  const auto n = static_cast<std::int64_t>(cond.n());
  auto clamp = [&](double v) { return c.clamp && v > 1.0 ? 1.0 : v; };

  Table t{{"condition", "x", "exact", "hull", "envelope", "constant", "bound", "bound_clamped", "hoeffding", "poisson",
           "gaussian"},
          {}};
  for (double x : xs) {
    const BoundResult r = bound(x);
    double hoeffding = kNaN;
    double poisson = kNaN;
    double gaussian = kNaN;
    if (c.condition == "variance") {
      hoeffding = hoeffding_variance_bound(n, cond.mean_sigma2(), *cond.common_b(), x);
      poisson = one_sided_poisson_bound(cond, x).value;
    } else if (c.condition == "range") {
      hoeffding = hoeffding_range_bound(n, cond.mean_p(), x);
      poisson = range_poisson_bound(cond, x).value;
    } else {
      const double a = std::sqrt(cond.a2());
      hoeffding = hoeffding_variance_bound(n, a * a, a, x);
      gaussian = symmetric_gaussian_bound(cond, x).value;
    }
    t.rows.push_back({c.condition, x, bound.survival()(x), r.hull_value, linear_envelope_eval(bound.survival(), x),
                      r.constant, r.value, r.clamped(), hoeffding, clamp(poisson), clamp(gaussian)});
  }
  t.write(out, c.format);
  return kExitOk;
}

int run_hull(const RunConfig& c, std::ostream& out) {
  const StepSurvival surv = survival_from(c);
  const LogLinearHull hull = log_concave_hull(surv);
  std::vector<char> on(surv.size(), 0);
  for (std::size_t i : hull.source_index()) on[i] = 1;
  Table t{{"x", "survival", "neg_log_survival", "on_hull"}, {}};
  for (std::size_t i = 0; i < surv.size(); ++i)
    t.rows.push_back({surv.knots()[i], surv.values()[i], -surv.log_values()[i], static_cast<bool>(on[i])});
  t.write(out, c.format);
  return kExitOk;
}

int run_fractional(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const StepSurvival surv = survival_from(c);
  const LogLinearHull hull = log_concave_hull(surv);
  auto xs = x_values(c, err);
  if (xs.empty()) {
    const auto k = surv.knots();
    for (std::size_t i = 1; i < k.size(); ++i) {
      xs.push_back(0.5 * (k[i - 1] + k[i]));
      xs.push_back(k[i]);
    }
  }
  bool ok = true;
  Table t{{"s", "x", "lhs", "rhs", "margin"}, {}};
  for (double s : c.s_values)
    for (double x : xs) {
      const double lhs = lhs_inf(surv, s, x).value;
      const double rhs = rhs_bound(hull, s, x);
      ok = ok && lhs <= rhs + 1e-9;
      t.rows.push_back({s, x, lhs, rhs, rhs - lhs});
    }
  t.write(out, c.format);
  return ok ? kExitOk : kExitVerificationFailure;
}

int run_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  cfg.seed = c.seed;
  if (c.n != 0) cfg.n = c.n;
  cfg.exec = c.serial ? Execution::serial : Execution::parallel;
  if (cfg.n < 1 || cfg.n > 3) throw UsageError("verify: --n must lie in 1..3");
  const SuiteReport report = run_suite(c.suite, cfg);
  Table t{{"check", "instances", "violations", "status"}, {}};
  for (const auto& ch : report.checks)
    t.rows.push_back({ch.name, static_cast<double>(ch.instances), static_cast<double>(ch.violations),
                      std::string(ch.violations == 0 ? "pass" : "fail")});
  t.write(out, c.format);
  for (const auto& n : report.notes) err << report.suite << ": " << n << '\n';
  err << report.suite << ": " << report.instances() << " instances, " << report.violations() << " violations\n";
  if (report.passed()) return kExitOk;
  if (!c.out_path.empty()) {
    std::ofstream dump(c.out_path + ".counterexamples.csv");
    write_counterexamples_csv(dump, report);
    err << "counterexamples written to " << c.out_path << ".counterexamples.csv\n";
  } else {
    write_counterexamples_csv(err, report);
  }
  return kExitVerificationFailure;
}

int run_confidence(const RunConfig& c, std::ostream& out) {
  if (c.n < 1) throw UsageError("confidence: need --n >= 1");
  const ConfidenceResult r = invert_for_confidence(c.n, c.mean, c.delta);
  Table t{{"n", "mean", "delta", "upper_limit", "bound_at_limit"}, {}};
  t.rows.push_back({static_cast<double>(c.n), c.mean, c.delta, r.upper_limit, r.bound_at_limit});
  t.write(out, c.format);
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_flag("--clamp", c.clamp, "Clamp coarsened bounds at 1");
  sub->add_option("--out", c.out_path, "Write the table to this file");
}

void add_distribution(CLI::App* sub, RunConfig& c) {
  sub->add_option("--n", c.n, "Number of i.i.d. summands");
  sub->add_option("--p", c.p, "Range atom {-p, 1-p}");
  sub->add_option("--sigma2", c.sigma2, "Variance atom with upper value --b");
  sub->add_option("--b", c.b, "Upper value of the variance atom");
  sub->add_option("--points", c.points, "Explicit support points")->delimiter(',');
  sub->add_option("--probs", c.probs, "Explicit probabilities")->delimiter(',');
}

void add_x(CLI::App* sub, RunConfig& c) {
  sub->add_option("--x", c.xs, "Evaluation points")->delimiter(',');
  sub->add_option("--x-from", c.x_from, "First x of a range");
  sub->add_option("--x-to", c.x_to, "Last x of a range (inclusive)");
  sub->add_option("--x-step", c.x_step, "Step of the x range");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Tail bounds for martingales with bounded differences"};
  app.require_subcommand(1);

  auto* bound = app.add_subcommand("bound", "Tabulate tail bounds for a martingale condition");
  add_common(bound, c);
  add_x(bound, c);
  bound->add_option("--condition", c.condition, "variance, range or symmetric")
      ->required()
      ->check(CLI::IsMember({"variance", "range", "symmetric"}));
  bound->add_option("--n", c.n, "Number of differences");
  bound->add_option("--b", c.b, "Common upper bound b");
  bound->add_option("--a", c.a, "Symmetric bound |X_k| <= a");
  bound->add_option("--p", c.p, "Common p (range condition)");
  bound->add_option("--sigma2", c.sigma2, "Common variance cap");
  bound->add_option("--bs", c.bs, "Per-step bounds b_k")->delimiter(',');
  bound->add_option("--ps", c.ps, "Per-step p_k")->delimiter(',');
  bound->add_option("--sigma2s", c.sigma2s, "Per-step variance caps")->delimiter(',');

  auto* hull = app.add_subcommand("hull", "Dump the log-concave hull of a discrete survival function");
  add_common(hull, c);
  add_distribution(hull, c);

  auto* fractional = app.add_subcommand("fractional", "Fractional-moment bound margins");
  add_common(fractional, c);
  add_distribution(fractional, c);
  add_x(fractional, c);
  fractional->add_option("--s", c.s_values, "Moment orders")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify, c);
  verify->add_option("--suite", c.suite, "Suite name")->required();
  verify->add_option("--n", c.n, "Tree depth for the dominance enumeration (1..3)");
  verify->add_flag("--serial", c.serial, "Run the serial reference loops");

  auto* confidence = app.add_subcommand("confidence", "Upper confidence limit for a bounded mean");
  add_common(confidence, c);
  confidence->add_option("--n", c.n, "Sample size")->required();
  confidence->add_option("--mean", c.mean, "Sample mean in [0, 1]")->required();
  confidence->add_option("--delta", c.delta, "Error probability in (0, 1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!c.out_path.empty() && !verify->parsed()) {
      file.open(c.out_path);
      if (!file) throw UsageError("cannot open " + c.out_path);
      sink = &file;
    }
    if (bound->parsed()) return run_bound(c, *sink, err);
    if (hull->parsed()) return run_hull(c, *sink);
    if (fractional->parsed()) return run_fractional(c, *sink, err);
    if (verify->parsed()) {
      if (!c.out_path.empty()) {
        file.open(c.out_path);
        if (!file) throw UsageError("cannot open " + c.out_path);
        return run_verify(c, file, err);
      }
      return run_verify(c, out, err);
    }
    if (confidence->parsed()) return run_confidence(c, *sink);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
  return kExitUsage;
}

}  // namespace tailbound
