#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"
#include "tailbound/optimize.hpp"
#include "tailbound/verify.hpp"

namespace tailbound {

namespace {

constexpr double kTreeTol = 1e-12;
constexpr std::uint64_t kMaxLeaves = 1'000'000;

double scaled_tol(double v) { return kTreeTol * std::max(1.0, std::fabs(v)); }

void check_node(const MartingaleConditions& cond, std::size_t k, const TreeNode& node) {
  if (node.values.empty() || node.values.size() != node.probs.size())
    throw std::invalid_argument("MartingaleTree: node needs matching, non-empty values and probabilities");
  double total = 0.0;
  double mean = 0.0;
  double second = 0.0;
  double scale = 1.0;
  for (std::size_t j = 0; j < node.values.size(); ++j) {
    const double v = node.values[j];
    const double p = node.probs[j];
    if (!(p > 0.0) || !std::isfinite(v)) throw std::invalid_argument("MartingaleTree: masses must be positive");
    total += p;
    mean += p * v;
    second += p * v * v;
    scale = std::max(scale, std::fabs(v));
  }
  if (std::fabs(total - 1.0) > kTreeTol) throw std::invalid_argument("MartingaleTree: masses must sum to 1");
  if (std::fabs(mean) > kTreeTol * scale) throw std::invalid_argument("MartingaleTree: conditional law not centered");

  const auto bs = cond.bs();
  const auto s2 = cond.sigma2s();
  for (double v : node.values) {
    bool ok = true;
    switch (cond.kind()) {
      case ConditionKind::range:
        ok = v >= -cond.ps()[k] - scaled_tol(1.0) && v <= bs[k] + scaled_tol(1.0);
        break;
      case ConditionKind::one_sided_variance:
      case ConditionKind::per_step:
        ok = v <= bs[k] + scaled_tol(bs[k]);
        break;
      case ConditionKind::symmetric:
        ok = std::fabs(v) <= bs[k] + scaled_tol(bs[k]);
        break;
    }
    if (!ok) throw std::invalid_argument("MartingaleTree: support point violates the step bound");
  }
  if ((cond.kind() == ConditionKind::one_sided_variance || cond.kind() == ConditionKind::per_step) &&
      second > s2[k] + scaled_tol(s2[k]))
    throw std::invalid_argument("MartingaleTree: conditional second moment exceeds its cap");
}

struct Atoms {
  double lo;
  double hi;
};

Atoms node_atoms(const MartingaleConditions& cond, std::size_t k, NodeParams par) {
  const double u = std::clamp(par.u, 0.0, 1.0);
  const double v = std::clamp(par.v, 0.0, 1.0);
  switch (cond.kind()) {
    case ConditionKind::range: {
      const double p = cond.ps()[k];
      return {-p * u, (1.0 - p) * v};
    }
    case ConditionKind::one_sided_variance:
    case ConditionKind::per_step: {
      const double hi = cond.bs()[k] * v;
      if (!(hi > 0.0)) return {0.0, 0.0};
      return {-u * cond.sigma2s()[k] / hi, hi};
    }
    case ConditionKind::symmetric:
      return {-cond.bs()[k] * u, cond.bs()[k] * v};
  }
  return {0.0, 0.0};
}

}  // namespace

bool is_degenerate(const MartingaleConditions& cond, std::size_t k, NodeParams params) {
  const Atoms a = node_atoms(cond, k, params);
  return !(a.lo < 0.0) || !(a.hi > 0.0);
}

TwoPointDist node_law(const MartingaleConditions& cond, std::size_t k, NodeParams params) {
  const Atoms a = node_atoms(cond, k, params);
  if (!(a.lo < 0.0) || !(a.hi > 0.0)) throw std::domain_error("node_law: parameters give the point mass at 0");
  const double width = a.hi - a.lo;
  return TwoPointDist(a.lo, a.hi, a.hi / width, -a.lo / width);
}

MartingaleTree::MartingaleTree(MartingaleConditions cond, std::vector<TreeNode> nodes)
    : cond_(std::move(cond)), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("MartingaleTree: no nodes");
  const std::size_t n = cond_.n();
  std::vector<char> seen(nodes_.size(), 0);
  // (node, depth) stack; leaves multiply along the way.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  seen[0] = 1;
  while (!stack.empty()) {
    const auto [idx, k] = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes_[idx];
    check_node(cond_, k, node);
    if (k + 1 == n) {
      if (!node.children.empty()) throw std::invalid_argument("MartingaleTree: tree is deeper than n");
      leaves_ += node.values.size();
      continue;
    }
    if (node.children.size() != node.values.size())
      throw std::invalid_argument("MartingaleTree: inner node needs one child per value");
    for (std::size_t c : node.children) {
      if (c >= nodes_.size() || seen[c]) throw std::invalid_argument("MartingaleTree: invalid child index");
      seen[c] = 1;
      stack.emplace_back(c, k + 1);
    }
  }
}

MartingaleTree MartingaleTree::two_point(const MartingaleConditions& cond, std::span<const NodeParams> params) {
  const std::size_t n = cond.n();
  if (n > 20 || params.size() != (std::size_t{1} << n) - 1)
    throw std::invalid_argument("MartingaleTree::two_point: need 2^n - 1 node parameters");
  std::vector<TreeNode> nodes;
  auto build = [&](auto&& self, std::size_t heap, std::size_t k) -> std::size_t {
    const std::size_t idx = nodes.size();
    nodes.emplace_back();
    const NodeParams par = params[heap];
    TreeNode node;
    if (is_degenerate(cond, k, par)) {
      node.values = {0.0};
      node.probs = {1.0};
    } else {
      const TwoPointDist law = node_law(cond, k, par);
      node.values = {law.v_lo(), law.v_hi()};
      node.probs = {law.p_lo(), law.p_hi()};
    }
    if (k + 1 < n) {
      for (std::size_t j = 0; j < node.values.size(); ++j) node.children.push_back(self(self, 2 * heap + 1 + j, k + 1));
    }
    nodes[idx] = std::move(node);
    return idx;
  };
  build(build, 0, 0);
  return MartingaleTree(cond, std::move(nodes));
}

std::vector<MartingaleTree::Path> MartingaleTree::paths() const {
  if (leaves_ > kMaxLeaves) throw ResourceError("MartingaleTree: more than 10^6 leaves");
  std::vector<Path> out;
  out.reserve(leaves_);
  struct Frame {
    std::size_t node;
    double sum;
    double log_prob;
  };
  std::vector<Frame> stack{{0, 0.0, 0.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes_[f.node];
    for (std::size_t j = 0; j < node.values.size(); ++j) {
      const double sum = f.sum + node.values[j];
      const double lp = f.log_prob + std::log(node.probs[j]);
      if (node.children.empty())
        out.push_back({sum, lp});
      else
        stack.push_back({node.children[j], sum, lp});
    }
  }
  return out;
}

double exact_tail(const MartingaleTree& tree, double x) {
  const double threshold = x - kTreeTol * std::max(1.0, std::fabs(x));
  std::vector<double> lps;
  for (const auto& p : tree.paths())
    if (p.sum >= threshold) lps.push_back(p.log_prob);
  return std::min(1.0, std::exp(log_sum_exp(lps)));
}

BernoulliSumBound applicable_bound(const MartingaleConditions& cond) {
  switch (cond.kind()) {
    case ConditionKind::one_sided_variance: return one_sided_hull_bound(cond);
    case ConditionKind::range: return range_hull_bound(cond);
    case ConditionKind::per_step:
    case ConditionKind::symmetric: return symmetric_hull_bound(cond);
  }
  throw std::logic_error("applicable_bound: unknown condition");
}

// --- worst-case search ----------------------------------------------------------

SearchReport worst_case_search(const MartingaleConditions& cond, double x, const SearchBudget& budget) {
  const std::size_t n = cond.n();
  if (n > 3) throw std::domain_error("worst_case_search: n must be at most 3");
  if (budget.grid_points < 2) throw std::domain_error("worst_case_search: need at least 2 grid points");
  const std::size_t m = (std::size_t{1} << n) - 1;
  std::vector<double> grid(static_cast<std::size_t>(budget.grid_points));
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) / static_cast<double>(grid.size() - 1);

  auto tail = [&](const std::vector<NodeParams>& ps) { return exact_tail(MartingaleTree::two_point(cond, ps), x); };

  std::vector<NodeParams> best(m, NodeParams{1.0, 1.0});
  double best_tail = tail(best);
  for (double u : grid)
    for (double v : grid) {
      std::vector<NodeParams> ps(m, NodeParams{u, v});
      const double t = tail(ps);
      if (t > best_tail) {
        best_tail = t;
        best = ps;
      }
    }

  auto ascend = [&](std::vector<NodeParams> ps) {
    double cur = tail(ps);
    for (int sweep = 0; sweep < budget.max_sweeps; ++sweep) {
      bool improved = false;
      for (std::size_t j = 0; j < m; ++j)
        for (int coord = 0; coord < 2; ++coord)
          for (double g : grid) {
            auto trial = ps;
            (coord == 0 ? trial[j].u : trial[j].v) = g;
            const double t = tail(trial);
            if (t > cur + 1e-15) {
              cur = t;
              ps = std::move(trial);
              improved = true;
            }
          }
      if (!improved) break;
    }
    return std::pair{cur, ps};
  };

  auto [t0, p0] = ascend(best);
  if (t0 > best_tail) {
    best_tail = t0;
    best = p0;
  }
  for (int r = 0; r < budget.restarts; ++r) {
    auto rng = instance_rng(budget.seed, 0x5752, static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<NodeParams> start(m);
    for (auto& p : start) p = {unit(rng), unit(rng)};
    auto [t, ps] = ascend(start);
    if (t > best_tail) {
      best_tail = t;
      best = ps;
    }
  }

  const double bound = applicable_bound(cond)(x).value;
  const double ratio = bound > 0.0 ? best_tail / bound : (best_tail > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return {best_tail, bound, ratio, best};
}

// --- the n = 1 constant ----------------------------------------------------------

double c1_ratio(double sigma2, double x) {
  if (!(sigma2 > 0.0)) throw std::domain_error("c1_ratio: sigma2 must be positive");
  if (!(x > 0.0 && x <= 1.0)) throw std::domain_error("c1_ratio: x must lie in (0, 1]");
  const double tail = sigma2 / (x * x + sigma2);
  const double neg_log_hull = (x + sigma2) / (1.0 + sigma2) * std::log1p(1.0 / sigma2);
  return tail * std::exp(neg_log_hull);
}

C1Result c1_search(Execution exec) {
  constexpr int kSigmaGrid = 801;
  constexpr int kXGrid = 1000;
  const double log_lo = std::log(1e-4);
  const double log_hi = std::log(1e4);
  const double dlog = (log_hi - log_lo) / (kSigmaGrid - 1);

  std::vector<C1Result> rows(kSigmaGrid);
  detail::parallel_for(kSigmaGrid, exec, [&](std::int64_t i) {
    const double s2 = std::exp(log_lo + dlog * static_cast<double>(i));
    C1Result r{-1.0, s2, 1.0};
    for (int j = 1; j <= kXGrid; ++j) {
      const double x = static_cast<double>(j) / kXGrid;
      const double v = c1_ratio(s2, x);
      if (v > r.value) r = {v, s2, x};
    }
    rows[static_cast<std::size_t>(i)] = r;
  });
  C1Result best = *std::max_element(rows.begin(), rows.end(),
                                    [](const C1Result& a, const C1Result& b) { return a.value < b.value; });

  double ls = std::log(best.sigma2);
  double x = best.x;
  double dx = 1.0 / kXGrid;
  for (int round = 0; round < 30; ++round) {
    const double a = std::max(log_lo, ls - dlog);
    const double b = std::min(log_hi, ls + dlog);
    ls = golden_section_min([&](double l) { return -c1_ratio(std::exp(l), x); }, a, b, 1e-14).arg;
    const double xa = std::max(1e-12, x - dx);
    const double xb = std::min(1.0, x + dx);
    x = golden_section_min([&](double t) { return -c1_ratio(std::exp(ls), t); }, xa, xb, 1e-14).arg;
  }
  const double v = c1_ratio(std::exp(ls), x);
  if (v > best.value) best = {v, std::exp(ls), x};
  return best;
}

}  // namespace tailbound
