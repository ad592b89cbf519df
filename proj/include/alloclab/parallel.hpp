#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace alloclab {

// Number of worker threads for parallel kernels. Capped by the
// ALLOC_LAB_THREADS environment variable when set.
inline int thread_cap() {
#ifdef _OPENMP
  static const int cap = [] {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("ALLOC_LAB_THREADS")) {
      const int requested = std::atoi(env);
      if (requested >= 1 && requested < n) n = requested;
    }
    return n < 1 ? 1 : n;
  }();
  return cap;
#else
  return 1;
#endif
}

}  // namespace alloclab
