#pragma once

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qsc::par {

inline int max_threads() {
#if defined(_OPENMP)
  return ::omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#if defined(_OPENMP)
  if (n > 0) ::omp_set_num_threads(n);
#else
  (void)n;
#endif
}

inline bool enabled() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

}  // namespace qsc::par
