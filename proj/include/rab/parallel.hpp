// Execution-mode switch for the flat verification sweeps (ball validity,
// exhaustive gate/wing scans, oracle comparisons). Every sweep keeps a plain
// serial loop as the reference; the OpenMP path must return the same result,
// including the same first failing index, and the tests hold it to that.
#pragma once

#include <cstddef>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rab::par {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

enum class Mode { serial, openmp };

bool openmp_compiled();
int max_threads();

// RAB_SERIAL=1 forces serial; otherwise OpenMP when compiled in.
Mode default_mode();

// Least i < n with !ok(i), or npos. The OpenMP path sweeps everything and
// reduces with min, so the reported index matches the serial early-exit scan.
template <class F>
std::size_t find_first_failure(std::size_t n, F&& ok, Mode m = default_mode()) {
#ifdef _OPENMP
  if (m == Mode::openmp) {
    const long long nn = static_cast<long long>(n);
    long long best = nn;
#pragma omp parallel for schedule(static) reduction(min : best)
    for (long long i = 0; i < nn; ++i) {
      if (!ok(static_cast<std::size_t>(i)) && i < best) best = i;
    }
    return best == nn ? npos : static_cast<std::size_t>(best);
  }
#else
  (void)m;
#endif
  for (std::size_t i = 0; i < n; ++i)
    if (!ok(i)) return i;
  return npos;
}

template <class F>
std::size_t count_failures(std::size_t n, F&& ok, Mode m = default_mode()) {
#ifdef _OPENMP
  if (m == Mode::openmp) {
    const long long nn = static_cast<long long>(n);
    long long bad = 0;
#pragma omp parallel for schedule(static) reduction(+ : bad)
    for (long long i = 0; i < nn; ++i) {
      if (!ok(static_cast<std::size_t>(i))) ++bad;
    }
    return static_cast<std::size_t>(bad);
  }
#else
  (void)m;
#endif
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!ok(i)) ++bad;
  return bad;
}

// body(i) for all i < n; used to fill image tables. body must not throw.
template <class F>
void for_all(std::size_t n, F&& body, Mode m = default_mode()) {
#ifdef _OPENMP
  if (m == Mode::openmp) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)m;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace rab::par
