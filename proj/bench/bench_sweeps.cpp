// Serial reference loops against the OpenMP kernels on the heavier sweeps.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "tailbound/verify.hpp"

using namespace tailbound;

namespace {

double time_it(const std::function<std::int64_t()>& f, std::int64_t& instances) {
  const auto t0 = std::chrono::steady_clock::now();
  instances = f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", omp_get_max_threads());
  std::printf("%-28s %10s %10s %10s %8s\n", "sweep", "instances", "serial_s", "parallel_s", "speedup");
  const std::pair<const char*, std::function<std::int64_t(Execution)>> sweeps[] = {
      {"fractional moment", [](Execution e) { return fractional_moment_sweep(e).instances; }},
      {"dominance range n=2", [](Execution e) { return dominance_enumeration(ConditionKind::range, 2, e).instances; }},
      {"schur 10^4", [](Execution e) { return schur_sweep(10'000, 7, e).instances; }},
      {"convex domination 10^4",
       [](Execution e) { return domination_sweep(DominationFamily::convex, 10'000, 7, e).instances; }},
      {"extremal n=1 10^5", [](Execution e) { return extremal_n1_search(100'000, 7, e).instances; }},
      {"monte carlo 10^6", [](Execution e) { return monte_carlo_dominance(1'000'000, 7, e).instances; }},
      {"c1 search", [](Execution e) { return static_cast<std::int64_t>(c1_search(e).value > 0.0); }},
  };
  for (const auto& [name, run] : sweeps) {
    std::int64_t n_serial = 0;
    std::int64_t n_parallel = 0;
    const double ts = time_it([&] { return run(Execution::serial); }, n_serial);
    const double tp = time_it([&] { return run(Execution::parallel); }, n_parallel);
    std::printf("%-28s %10lld %10.3f %10.3f %8.2f\n", name, static_cast<long long>(n_serial), ts, tp, ts / tp);
    if (n_serial != n_parallel) {
      std::printf("instance counts differ for %s\n", name);
      return 1;
    }
  }
  return 0;
}
