#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Execution policy for the data-parallel kernels. Every kernel exists in a
// serial reference form and an OpenMP form; both write per-index results to
// disjoint slots and reduce in a fixed block order, so the two policies (and
// any thread count) produce bit-identical doubles. Tests compare the paths,
// tools/bench_kernels.cpp times them.
namespace smt::par {

enum class exec { serial, openmp };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void for_index(std::size_t count, exec mode, F&& fn) {
    if (mode == exec::openmp) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            fn(static_cast<std::size_t>(i));
        return;
#endif
    }
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

// Deterministic sum of term(0) + ... + term(count-1): partial sums are taken
// per fixed-size block in index order, blocks may run concurrently, and the
// block results are added serially in block order. The result is therefore
// independent of the thread count.
template <class F>
double block_sum(std::size_t count, exec mode, F&& term, std::size_t block = 2048) {
    if (count == 0) return 0.0;
    std::size_t nblocks = (count + block - 1) / block;
    std::vector<double> partial(nblocks, 0.0);
    for_index(nblocks, mode, [&](std::size_t b) {
        double s = 0.0;
        std::size_t lo = b * block;
        std::size_t hi = lo + block < count ? lo + block : count;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace smt::par
