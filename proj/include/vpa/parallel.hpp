#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vpa {

inline int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Static schedule keeps the iteration->thread assignment reproducible.
// Kernels built on this must only write to disjoint per-index slots;
// reductions are done in a separate fixed-order pass.
template <typename F>
void parallel_for(std::int64_t n, F&& body) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace vpa
