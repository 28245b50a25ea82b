#pragma once
// Thread-count resolution and a row-parallel runner. Workers write disjoint
// row ranges; no shared reductions, so output is identical for any count.

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace tomo {

// requested > 0 wins; else TOMO_THREADS; else hardware concurrency
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TOMO_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// fn(row_begin, row_end) on contiguous blocks
inline void parallel_rows(std::size_t n_rows, int threads,
                          const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t nt = std::max(1, threads);
    if (nt == 1 || n_rows < 2 * nt) {
        fn(0, n_rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n_rows + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n_rows, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool) th.join();
}

}  // namespace tomo
