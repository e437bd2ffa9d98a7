#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace odg {

// Parallel kernels in this project are written so that their results are
// bitwise identical to the serial reference implementations: every output
// slot is computed independently (or accumulated in a fixed per-slot order),
// never through a thread-count-dependent reduction.

template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) fn(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace odg
