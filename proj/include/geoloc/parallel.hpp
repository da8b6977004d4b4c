// OpenMP helpers. Every parallel loop in the library writes to
// pre-sized, index-addressed slots, so results are identical for any
// thread count (including a build without OpenMP).

#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace geoloc {

inline int effective_threads(int requested) {
#ifdef _OPENMP
    if (requested <= 0) return omp_get_max_threads();
    return requested;
#else
    (void)requested;
    return 1;
#endif
}

// Runs fn(i) for i in [0, n). threads <= 1 falls back to a plain loop.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& fn) {
#ifdef _OPENMP
    if (effective_threads(threads) > 1 && n > 1) {
        const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads(threads))
        for (long long i = 0; i < nn; ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#endif
    (void)threads;
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace geoloc
