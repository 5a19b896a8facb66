#ifndef GHOM_PARALLEL_HPP
#define GHOM_PARALLEL_HPP

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ghom {

// Hot kernels take an execution mode so the OpenMP path can be checked
// bit-for-bit against the serial reference. Kernels only ever write to
// disjoint slots indexed by the loop variable; reductions happen afterwards
// in a fixed serial order, which keeps outputs identical across modes and
// thread counts.
enum class Exec : std::uint8_t { Serial, Parallel };

template <typename Fn>
inline void par_for(Exec mode, std::int64_t n, Fn&& body) {
#ifdef _OPENMP
    if (mode == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
#else
    (void)mode;
#endif
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace ghom

#endif
