#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nfa {

// Execution mode for the data-parallel kernels. The serial mode is the
// reference implementation; the parallel mode distributes iterations over
// OpenMP threads. Every kernel in this codebase is written so that both
// modes perform identical arithmetic per iteration and iterations touch
// disjoint state, which makes the two modes bit-identical.
enum class ExecMode {
    serial,
    parallel,
};

inline ExecMode default_exec_mode() {
#ifdef _OPENMP
    return ExecMode::parallel;
#else
    return ExecMode::serial;
#endif
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs f(i) for i in [0, n). Iterations must not share mutable state.
template <class F>
void parallel_for(std::size_t n, ExecMode mode, F&& f) {
#ifdef _OPENMP
    if (mode == ExecMode::parallel && n > 1) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            f(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        f(i);
    }
}

} // namespace nfa
