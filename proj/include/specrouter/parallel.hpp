#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specrouter {

// Thread budget for the parallel kernels. 0 means the OpenMP default.
// Builds without OpenMP run everything serially regardless of the setting.
int max_threads();
void set_max_threads(int n);

inline bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

// Index-parallel loop. Every kernel built on this writes result slot i from
// iteration i only, so parallel output is identical to the serial loop.
template <typename Fn>
void parallel_for(size_t n, Fn&& fn) {
#ifdef _OPENMP
    const int threads = max_threads();
    if (threads != 1 && n > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : omp_get_max_threads())
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<size_t>(i));
        return;
    }
#endif
    for (size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace specrouter
