// Loop helpers shared by the sweeps. Not installed.
#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "tailbound/verify.hpp"

namespace tailbound::detail {

/// Runs f(i) for i in [0, n). Exceptions thrown by f are rethrown after the
/// loop (the first one in index order wins in serial mode, any one in parallel).
template <class F>
void parallel_for(std::int64_t n, Execution exec, F&& f) {
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
#pragma omp critical(tailbound_parallel_for_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

inline constexpr std::size_t kMaxCounterexamples = 100;

/// Runs instance(i) over [0, n) and tallies the counterexamples it returns,
/// merging in index order so the report does not depend on scheduling.
template <class F>
CheckSummary sweep(std::string name, std::int64_t n, Execution exec, std::vector<Counterexample>* out, F&& instance) {
  std::vector<std::optional<Counterexample>> results(static_cast<std::size_t>(n));
  parallel_for(n, exec, [&](std::int64_t i) { results[static_cast<std::size_t>(i)] = instance(i); });
  CheckSummary summary{std::move(name), n, 0};
  for (auto& r : results) {
    if (!r) continue;
    ++summary.violations;
    if (out && out->size() < kMaxCounterexamples) out->push_back(std::move(*r));
  }
  return summary;
}

}  // namespace tailbound::detail
