/**
 * @file mc_bench.cpp
 * @brief Timing harness: OpenMP replica kernels against the serial reference.
 *
 * Runs the replica-map experiments in both execution modes, checks that
 * every reported statistic is bit-identical (the contract that makes the
 * parallel kernel a pure speedup), and prints the wall-clock comparison.
 *
 * Usage: mc_bench [replicas] [n]   (defaults: 10000 replicas, n = 1024)
 * Exits nonzero if any serial/parallel statistic differs.
 */

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stochlab/distributions.hpp"
#include "stochlab/monte_carlo.hpp"
#include "stochlab/stream.hpp"

namespace {

using namespace stochlab;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool same_statistics(const ExperimentReport& a, const ExperimentReport& b) {
  if (a.statistics.size() != b.statistics.size()) return false;
  for (std::size_t i = 0; i < a.statistics.size(); ++i) {
    if (a.statistics[i].first != b.statistics[i].first) return false;
    if (a.statistics[i].second != b.statistics[i].second) return false;
  }
  return true;
}

struct BenchRow {
  std::string name;
  double serial_s = 0.0;
  double parallel_s = 0.0;
  bool identical = false;
};

template <typename Run>
BenchRow bench(const std::string& name, Run run) {
  BenchRow row;
  row.name = name;

  double t0 = now_seconds();
  const ExperimentReport serial = run(ExecMode::Serial);
  row.serial_s = now_seconds() - t0;

  t0 = now_seconds();
  const ExperimentReport parallel = run(ExecMode::Parallel);
  row.parallel_s = now_seconds() - t0;

  row.identical = same_statistics(serial, parallel);
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t replicas =
      argc > 1 ? static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10))
               : 10000;
  const std::size_t n =
      argc > 2 ? static_cast<std::size_t>(std::strtoull(argv[2], nullptr, 10))
               : 1024;
  const std::uint64_t seed = 42;

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp unavailable: both runs use the serial kernel\n");
#endif
  std::printf("replicas = %zu, n = %zu, seed = %llu\n\n", replicas, n,
              static_cast<unsigned long long>(seed));

  const BenchRow rows[] = {
      bench("clt bernoulli(1/2)",
            [&](ExecMode mode) {
              return clt_experiment(bernoulli(Rational(1, 2)), n, replicas,
                                    SeededStream(seed), mode);
            }),
      bench("clt exponential(1)",
            [&](ExecMode mode) {
              return clt_experiment(exponential(Rational(1)), n, replicas,
                                    SeededStream(seed), mode);
            }),
      bench("clt gaussian(0,1)",
            [&](ExecMode mode) {
              return clt_experiment(gaussian(Rational(0), Rational(1)), n,
                                    replicas, SeededStream(seed), mode);
            }),
      bench("martingale clt (sign rule)",
            [&](ExecMode mode) {
              return martingale_clt_experiment(n, replicas, SeededStream(seed),
                                               PredictableRule::SignOfPartialSum,
                                               mode);
            }),
  };

  std::printf("%-28s %10s %10s %9s %10s\n", "kernel", "serial s", "parallel s",
              "speedup", "identical");
  bool all_identical = true;
  for (const BenchRow& row : rows) {
    const double speedup =
        row.parallel_s > 0.0 ? row.serial_s / row.parallel_s : 0.0;
    std::printf("%-28s %10.3f %10.3f %8.2fx %10s\n", row.name.c_str(),
                row.serial_s, row.parallel_s, speedup,
                row.identical ? "yes" : "NO");
    all_identical = all_identical && row.identical;
  }

  if (!all_identical) {
    std::printf("\nserial/parallel statistics differ\n");
    return 1;
  }
  return 0;
}
