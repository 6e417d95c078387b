#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace squeeze {

namespace detail {
inline int& worker_override() {
  static int k = -1;
  return k;
}
}  // namespace detail

// Number of threads used by the parallel kernels. Resolution order:
// set_worker_count() > SQUEEZE_SPECTRA_WORKERS > OpenMP default.
inline int worker_count() {
  if (detail::worker_override() > 0) return detail::worker_override();
  if (const char* env = std::getenv("SQUEEZE_SPECTRA_WORKERS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_worker_count(int k) { detail::worker_override() = k; }

// Parallel loop over [0, n). Results must not depend on iteration order;
// every body writes disjoint locations.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
  const int nw = worker_count();
  if (nw > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(nw)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

namespace detail {
constexpr std::size_t kReduceChunk = 4096;
}

// Sum of term(i) over [0, n). Partial sums are taken over a fixed chunk
// partition and combined in chunk order, so the result is bitwise identical
// for every worker count. Do not replace with an OpenMP reduction clause:
// that would tie the rounding pattern to the thread count.
template <typename F>
double deterministic_sum(std::size_t n, F&& term) {
  const std::size_t chunk = detail::kReduceChunk;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  if (nchunks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  });
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

// Max of term(i) over [0, n). Max is order independent, a plain chunked
// combine is already deterministic.
template <typename F>
double deterministic_max(std::size_t n, F&& term) {
  const std::size_t chunk = detail::kReduceChunk;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  if (nchunks <= 1) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, term(i));
    return m;
  }
  std::vector<double> partial(nchunks, -std::numeric_limits<double>::infinity());
  parallel_for(nchunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, term(i));
    partial[c] = m;
  });
  double m = -std::numeric_limits<double>::infinity();
  for (double p : partial) m = std::max(m, p);
  return m;
}

}  // namespace squeeze
