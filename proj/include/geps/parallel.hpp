#pragma once

#include <cstdlib>

#ifdef GEPS_HAVE_OPENMP
#include <omp.h>
#endif

namespace geps {

/// Worker count: GEPS_THREADS if set and positive, else the OpenMP default, else 1.
inline int thread_count() {
  if (const char* env = std::getenv("GEPS_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
#ifdef GEPS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace geps
