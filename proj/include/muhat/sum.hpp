#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace muhat {

// Pairwise (cascade) summation. Rounding error grows like O(log n) instead of
// O(n), and the result depends only on element order, never on thread count.
template <typename T, typename F>
T pairwise_sum_n(std::size_t begin, std::size_t end, F&& term) {
    const std::size_t n = end - begin;
    if (n <= 32) {
        T acc{};
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_sum_n<T>(begin, mid, term) + pairwise_sum_n<T>(mid, end, term);
}

template <typename T>
T pairwise_sum(std::span<const T> xs) {
    return pairwise_sum_n<T>(0, xs.size(), [&](std::size_t i) { return xs[i]; });
}

inline double pairwise_sum(const std::vector<double>& xs) {
    return pairwise_sum(std::span<const double>(xs));
}

}  // namespace muhat
