#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace windeval {

// Kernels that loop over independent samples accept an Execution tag. The
// serial path is the reference; the parallel path must produce bit-identical
// results because every reduction happens afterwards in index order.
enum class Execution { serial, parallel };

// Exceptions thrown by fn are collected and the one from the lowest index is
// rethrown after the loop, for both policies.
template <typename Fn>
void for_each_index(Execution exec, std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
#ifdef _OPENMP
  if (exec == Execution::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) guarded(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  }
#else
  (void)exec;
  for (std::size_t i = 0; i < n; ++i) guarded(i);
#endif
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// Pairwise summation with a fixed split, so the result only depends on the
// order of the input.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean_of(std::span<const double> xs) {
  return xs.empty() ? 0.0 : pairwise_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace windeval
