#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace snspd {

// Execution policy for independent-trial workloads. Serial is the reference
// path; OpenMP must produce bit-identical results because every trial derives
// its own RNG stream from (seed, trial index) and results are written into
// per-trial slots before any reduction.
enum class Execution { Serial, OpenMP };

inline Execution default_execution() {
#ifdef _OPENMP
  return Execution::OpenMP;
#else
  return Execution::Serial;
#endif
}

// Applies fn(trial) for trial in [0, n) and returns the results in trial
// order. fn must be safe to call concurrently for distinct trials.
template <typename T, typename Fn>
std::vector<T> run_trials(std::size_t n, Execution exec, Fn&& fn) {
  std::vector<T> out(n);
#ifdef _OPENMP
  if (exec == Execution::OpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    return out;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

// Worker cap for sweep fan-out; values < 1 are ignored.
inline void set_worker_count(int jobs) {
#ifdef _OPENMP
  if (jobs >= 1) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

}  // namespace snspd
