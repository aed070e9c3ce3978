#pragma once

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "synlab/errors.hpp"

namespace synlab::lattice {

/// Mixed-radix enumeration of interior-node assignments.  Indices are
/// big-endian in the node order, so histories sharing a leading node value
/// occupy one contiguous block, and that block is the parallel work unit.
struct Enumeration {
    int grid_size = 0;
    int interior_nodes = 0;
    long long total = 0;
};

inline Enumeration make_enumeration(int grid_size, int interior_nodes,
                                    long long guard = 10'000'000) {
    if (grid_size < 1 || interior_nodes < 0)
        throw Error(ErrorCode::InvalidArgument, "bad enumeration shape");
    long long total = 1;
    for (int j = 0; j < interior_nodes; ++j) {
        total *= grid_size;
        if (total > guard)
            throw Error(ErrorCode::TooLarge, "history count exceeds the enumerability guard");
    }
    return {grid_size, interior_nodes, total};
}

/// Reference implementation: one odometer sweep in index order.
/// fn(index, digits) sees digit j = grid index of interior node j.
template <typename Fn>
void for_each_history_serial(const Enumeration& e, Fn&& fn) {
    std::vector<int> digits(static_cast<std::size_t>(e.interior_nodes), 0);
    for (long long idx = 0; idx < e.total; ++idx) {
        fn(idx, digits);
        for (int j = e.interior_nodes - 1; j >= 0; --j) {
            if (++digits[j] < e.grid_size) break;
            digits[j] = 0;
        }
    }
}

/// OpenMP kernel partitioned by the leading node value.  Every history index
/// is written independently, so outputs are bit-identical to the serial sweep
/// for any worker count.
template <typename Fn>
void for_each_history_parallel(const Enumeration& e, int workers, Fn&& fn) {
    if (e.interior_nodes == 0 || e.total < 2) {
        for_each_history_serial(e, fn);
        return;
    }
    const long long block = e.total / e.grid_size;
#ifdef _OPENMP
    const int requested = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(requested)
#else
    (void)workers;
#endif
    for (int lead = 0; lead < e.grid_size; ++lead) {
        std::vector<int> digits(static_cast<std::size_t>(e.interior_nodes), 0);
        digits[0] = lead;
        long long idx = block * lead;
        for (long long i = 0; i < block; ++i) {
            fn(idx, digits);
            ++idx;
            for (int j = e.interior_nodes - 1; j >= 1; --j) {
                if (++digits[j] < e.grid_size) break;
                digits[j] = 0;
            }
        }
    }
}

} // namespace synlab::lattice
