// Brute-force, enumeration and Monte Carlo checks of the tail bounds and the
// inequalities behind them.
//
// Every sweep takes an Execution flag. `serial` runs a plain loop and is the
// reference; `parallel` spreads the same per-instance kernel over OpenMP
// threads. Each instance draws from its own generator seeded by
// (seed, stream, index), so both modes give identical reports.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/distributions.hpp"

namespace tailbound {

enum class Execution { serial, parallel };

/// Thrown when an enumeration would be too large to run.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- martingale trees ----------------------------------------------------------

struct TreeNode {
  std::vector<double> values;
  std::vector<double> probs;
  std::vector<std::size_t> children;  // one per value; empty on the last level
};

/// Two-point node parameters in [0, 1]^2. u scales the lower atom, v the
/// upper one; u == 0 or v == 0 gives the point mass at 0.
struct NodeParams {
  double u;
  double v;
};

class MartingaleTree {
 public:
  /// Node 0 is the root. Validates that every conditional law is centered
  /// (1e-12), that every leaf sits at depth cond.n(), and that the node at
  /// depth k meets the k-th constraint of cond.
  MartingaleTree(MartingaleConditions cond, std::vector<TreeNode> nodes);

  /// Tree whose nodes are the two-point laws given by params, laid out as a
  /// heap (children of i at 2i+1, 2i+2). A degenerate node has a single child
  /// at 2i+1. params.size() must be 2^n - 1.
  static MartingaleTree two_point(const MartingaleConditions& cond, std::span<const NodeParams> params);

  const MartingaleConditions& conditions() const { return cond_; }
  std::size_t depth() const { return cond_.n(); }
  std::span<const TreeNode> nodes() const { return nodes_; }
  std::uint64_t leaf_count() const { return leaves_; }

  struct Path {
    double sum;
    double log_prob;
  };
  /// All root-to-leaf paths. Throws ResourceError above 10^6 leaves.
  std::vector<Path> paths() const;

 private:
  MartingaleConditions cond_;
  std::vector<TreeNode> nodes_;
  std::uint64_t leaves_ = 0;
};

/// The two-point law of a node at depth k (0-based) under cond.
TwoPointDist node_law(const MartingaleConditions& cond, std::size_t k, NodeParams params);
bool is_degenerate(const MartingaleConditions& cond, std::size_t k, NodeParams params);

/// P{M_n >= x} by enumeration (paths with sum >= x - 1e-12 max(1, |x|)).
double exact_tail(const MartingaleTree& tree, double x);

/// The bound that applies under cond: e^2/2 B° (one-sided + variance),
/// e B° (range), 2e^3/9 B° (per-step, symmetric).
BernoulliSumBound applicable_bound(const MartingaleConditions& cond);

// --- worst-case search ----------------------------------------------------------

struct SearchBudget {
  int grid_points = 21;
  int restarts = 16;
  int max_sweeps = 40;
  std::uint64_t seed = 1;
};

struct SearchReport {
  double best_tail;
  double bound_value;
  double ratio;
  std::vector<NodeParams> argmax;
};

/// Maximizes exact_tail over two-point trees (n <= 3): a grid over trees
/// with identical nodes, then coordinate ascent from it and from random
/// restarts. Conditional laws are restricted to two atoms.
SearchReport worst_case_search(const MartingaleConditions& cond, double x, const SearchBudget& budget = {});

// --- the n = 1 constant -------------------------------------------------------------

/// [sigma2 / (x^2 + sigma2)] / B°(x) for the single atom eps(sigma2, 1), x in (0, 1].
double c1_ratio(double sigma2, double x);

struct C1Result {
  double value;
  double sigma2;
  double x;
};

/// sup of c1_ratio over sigma2 in [1e-4, 1e4] (log grid) and x in (0, 1],
/// refined by alternating golden-section steps.
C1Result c1_search(Execution exec = Execution::parallel);

// --- comparison inequalities ------------------------------------------------------------

struct Comparison {
  double lhs;
  double rhs;
  bool holds;
};

/// E (T_n - t)_+^2 <= E (S_n - t)_+^2 + 1e-10 where T_n sums theta(x_k, 1)
/// and S_n sums n copies of theta(mean x, 1). xs nonnegative, at most 8.
Comparison schur_check(std::span<const double> xs, double t);

enum class DominationFamily { convex, moment, symmetric };

std::string to_string(DominationFamily f);

struct DominationParams {
  double a = 0.0;       // convex: lower end of the support interval
  double b = 0.0;       // all families: upper bound
  double sigma2 = 0.0;  // moment / symmetric: second-moment cap
};

struct DominationResult {
  double worst_margin;  // max over test functions of E f(X) - E f(atom)
  std::string worst_function;
  bool holds;           // worst_margin <= 1e-10 max(1, E f(atom))
};

/// E f(X) <= E f(atom) over the family's test functions. The atom is the
/// two-point law on {a, b} (convex), eps(sigma2, b) (moment) or +-max(sigma, b)
/// (symmetric). Throws std::domain_error if X violates the family's constraints.
DominationResult convex_domination_check(DominationFamily family, const DiscreteDist& x,
                                         const DominationParams& params);

/// Both inputs are log-concave sequences with contiguous support on 0, 1, ...
/// Returns whether their convolution and all three tail-sum sequences are
/// log-concave (1e-12 relative). Throws std::domain_error on bad inputs.
bool convolution_log_concavity_check(std::span<const double> p, std::span<const double> q);

/// Whether the nonnegative sequence satisfies p_k^2 >= p_{k-1} p_{k+1} (relative slack).
bool is_log_concave_sequence(std::span<const double> p, double rel_tol = 1e-12);

struct OptimalityReport {
  std::vector<std::int64_t> ns;
  std::vector<double> g;  // (1/n) log P{Bin(n, p) >= z n}
  double f;               // z log(z/p) + (1 - z) log((1 - z)/(1 - p))
  double hoeffding;       // H(z; p)
  bool dominated;         // g_n <= -f for every n
  bool gap_decreasing;    // |g_n + f| strictly decreasing along ns
  double final_gap;
  bool matches_h;         // |exp(-f) - H(z; p)| <= 1e-12
};

OptimalityReport hoeffding_optimality_sequence(double p, double z, std::span<const std::int64_t> ns);

/// P{X >= 0} / P{eps >= 0} for X = 0 against eps(sigma2, 1): (1 + sigma2) / sigma2.
double hull_necessity_ratio(double sigma2);

/// |P{Bin(n+m, q) >= (lambda + x/b) / (1 + lambda/(n+m))} - P{eta >= lambda + x/b}|
/// for each m, with lambda = sigma2_total / b^2, q = lambda / (n + m + lambda).
std::vector<double> poisson_limit_check(std::int64_t n, double sigma2_total, double b, std::span<const std::int64_t> ms,
                                        double x);

// --- Monte Carlo -----------------------------------------------------------------------

/// Draws one value of M_n. Must be callable concurrently.
using PathSampler = std::function<double(std::mt19937_64&)>;

/// n i.i.d. differences uniform on the given points.
PathSampler iid_uniform_sampler(std::vector<double> points, std::int64_t n);

struct MonteCarloEstimate {
  double estimate;
  double std_error;
  std::int64_t trials;
};

/// Fraction of trials with M_n >= x. Trials run in chunks of 2^14, chunk c
/// seeded by (seed, c), so the estimate does not depend on the thread count.
MonteCarloEstimate monte_carlo_tail(const PathSampler& sampler, std::int64_t trials, double x, std::uint64_t seed,
                                    Execution exec = Execution::parallel);

/// monte_carlo_tail at several thresholds from one set of trials.
std::vector<MonteCarloEstimate> monte_carlo_tails(const PathSampler& sampler, std::int64_t trials,
                                                  std::span<const double> xs, std::uint64_t seed,
                                                  Execution exec = Execution::parallel);

// --- suites --------------------------------------------------------------------------------

/// Suite names accepted by run_suite.
std::span<const std::string> suite_names();

struct SuiteConfig {
  std::uint64_t seed = 7;
  std::int64_t n = 2;  // tree depth for the dominance enumeration (1..3)
  Execution exec = Execution::parallel;
};

struct Counterexample {
  std::string check;
  std::string params;
  double lhs;
  double rhs;
};

struct CheckSummary {
  std::string name;
  std::int64_t instances = 0;
  std::int64_t violations = 0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckSummary> checks;
  std::vector<std::string> notes;  // headline numbers, e.g. the c1 estimate
  std::vector<Counterexample> counterexamples;

  std::int64_t instances() const;
  std::int64_t violations() const;
  bool passed() const { return violations() == 0; }
};

/// Runs one suite (or "all"). Throws std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config = {});

void write_counterexamples_csv(std::ostream& os, const SuiteReport& report);

// Individual checks, also used by the suites.
CheckSummary fractional_moment_sweep(Execution exec, std::vector<Counterexample>* out = nullptr);
CheckSummary mgf_closed_form_sweep(Execution exec, std::vector<Counterexample>* out = nullptr);
CheckSummary dominance_enumeration(ConditionKind kind, std::int64_t n, Execution exec,
                                   std::vector<Counterexample>* out = nullptr);
CheckSummary extremal_n1_search(std::int64_t samples, std::uint64_t seed, Execution exec,
                                std::vector<Counterexample>* out = nullptr);
CheckSummary hull_sandwich_sweep(std::int64_t samples, std::uint64_t seed, Execution exec,
                                 std::vector<Counterexample>* out = nullptr, std::vector<std::string>* notes = nullptr);
CheckSummary schur_sweep(std::int64_t samples, std::uint64_t seed, Execution exec,
                         std::vector<Counterexample>* out = nullptr);
CheckSummary domination_sweep(DominationFamily family, std::int64_t samples, std::uint64_t seed, Execution exec,
                              std::vector<Counterexample>* out = nullptr);
CheckSummary log_concavity_sweep(std::int64_t samples, std::uint64_t seed, Execution exec,
                                 std::vector<Counterexample>* out = nullptr);
CheckSummary monte_carlo_dominance(std::int64_t trials, std::uint64_t seed, Execution exec,
                                   std::vector<Counterexample>* out = nullptr, std::vector<std::string>* notes = nullptr);

/// Random centered law on 2..7 points: grid points in [-2, 2] in steps of
/// 0.25, flat-Dirichlet masses, then shifted to mean 0.
DiscreteDist random_centered_law(std::mt19937_64& rng);

/// Generator for instance `index` of stream `stream`.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace tailbound
