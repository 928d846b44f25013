#pragma once

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace hgr {

inline int hardware_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline bool in_parallel_region() {
#if defined(_OPENMP)
    return omp_in_parallel() != 0;
#else
    return false;
#endif
}

// Effective worker count for a parallel loop: `requested` threads, 0 meaning
// "all available", collapsed to 1 inside an enclosing parallel region so
// nested loops stay serial.
inline int resolve_workers(int requested) {
    if (in_parallel_region()) return 1;
    const int hw = hardware_threads();
    if (requested <= 0 || requested > hw) return hw;
    return requested;
}

}  // namespace hgr
