#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace funcspace {

/// Worker count: FUNCLAB_THREADS if set, otherwise all hardware threads.
inline unsigned thread_count() {
    if (const char* env = std::getenv("FUNCLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs f(i) for i in [0, n). Tasks must write only to their own slots;
/// partitioning is static so results do not depend on the worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    if (n == 0) return;
    unsigned workers = thread_count();
    if (workers <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Sums a list of partial results by halving pairs. The reduction tree is a
/// function of the list length only, so the final double is bit-stable no
/// matter how the partials were produced.
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (n % 2 == 1) {
            v[half] = v[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return v[0];
}

}  // namespace funcspace
