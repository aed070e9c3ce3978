#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace synlab {

// Pairwise summation over a fixed-order array.  The reduction tree depends
// only on the element count, so the result is bit-identical no matter how
// many threads produced the array.  This is the one reduction primitive every
// normalization in the library goes through.
template <typename T>
T pairwise_sum(std::span<const T> values) {
    const std::size_t n = values.size();
    if (n == 0) return T(0);
    if (n <= 8) {
        T acc = values[0];
        for (std::size_t i = 1; i < n; ++i) acc += values[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values.data(), values.size()));
}

} // namespace synlab
