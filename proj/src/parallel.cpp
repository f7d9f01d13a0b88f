#include "nsf/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nsf::par {

namespace {
Backend g_backend =
#ifdef _OPENMP
    Backend::OpenMP;
#else
    Backend::Serial;
#endif
} // namespace

Backend backend() { return g_backend; }

void set_backend(Backend b) {
#ifndef _OPENMP
    b = Backend::Serial;
#endif
    g_backend = b;
}

bool openmp_compiled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace detail {

void run_indexed(std::size_t n, void* ctx, void (*body)(void*, std::size_t)) {
#ifdef _OPENMP
    if (g_backend == Backend::OpenMP && n > 1) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(ctx, static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) body(ctx, i);
}

} // namespace detail

} // namespace nsf::par
