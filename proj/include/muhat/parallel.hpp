#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace muhat {

// Global default worker count for heavy loops; 0 means "ask the hardware".
// The CLI sets this from --threads. All results are independent of the
// value: work is partitioned by index range and reduced in index order.
inline std::atomic<unsigned>& thread_override() {
    static std::atomic<unsigned> v{0};
    return v;
}

inline unsigned resolve_threads(unsigned requested) {
    unsigned t = requested != 0 ? requested : thread_override().load();
    if (t == 0) t = std::thread::hardware_concurrency();
    return std::max(1u, t);
}

// Runs body(lo, hi) on contiguous chunks of [0, n). Chunk boundaries depend
// only on n and the worker count, so per-chunk outputs are reproducible.
template <typename Body>
void parallel_chunks(std::size_t n, const Body& body, unsigned threads = 0) {
    const unsigned t = static_cast<unsigned>(
        std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
    if (t <= 1 || n == 0) {
        if (n > 0) body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    const std::size_t chunk = (n + t - 1) / t;
    for (unsigned k = 1; k < t; ++k) {
        const std::size_t lo = std::min(n, k * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    body(0, std::min(n, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace muhat
