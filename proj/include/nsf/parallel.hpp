#pragma once

#include <cstddef>
#include <vector>

namespace nsf::par {

// Execution backend for the grid kernels. `Serial` is the reference path kept
// for testing and benchmarking; `OpenMP` is the default when compiled in.
// Both paths produce bit-identical results: pointwise kernels are pure per
// index, and reductions accumulate fixed-size blocks that are combined in
// block order regardless of how blocks were assigned to threads.
enum class Backend { Serial, OpenMP };

Backend backend();
void set_backend(Backend b);
bool openmp_compiled();
int max_threads();

inline constexpr std::size_t kReduceBlock = 1024;

namespace detail {
void run_indexed(std::size_t n, void* ctx, void (*body)(void*, std::size_t));
}

template <typename F>
void for_each(std::size_t n, F&& body) {
    detail::run_indexed(n, const_cast<void*>(static_cast<const void*>(&body)),
                        [](void* ctx, std::size_t i) { (*static_cast<F*>(ctx))(i); });
}

// Deterministic sum of term(i) for i in [0, n): per-block partial sums in
// index order, blocks folded in ascending block order.
template <typename F>
double sum(std::size_t n, F&& term) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    if (nblocks <= 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += term(i);
        return s;
    }
    std::vector<double> partial(nblocks, 0.0);
    for_each(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

// Deterministic max (order-independent anyway, but routed through the same
// blocked machinery so serial and parallel paths share one code shape).
template <typename F>
double max(std::size_t n, F&& term) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    if (nblocks <= 1) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = term(i);
            if (v > m) m = v;
        }
        return m;
    }
    std::vector<double> partial(nblocks, 0.0);
    for_each(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = term(i);
            if (v > m) m = v;
        }
        partial[b] = m;
    });
    double total = 0.0;
    for (double m : partial)
        if (m > total) total = m;
    return total;
}

} // namespace nsf::par
