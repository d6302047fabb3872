#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace oscint {

// Runs fn(i) for i in [0, n) on `workers` threads.  Work is pulled index by
// index, so uneven jobs balance; callers store results by index, which keeps
// output identical for every worker count.
template <class F>
void parallel_for(std::size_t n, int workers, F&& fn) {
    if (workers < 1) workers = 1;
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nw = std::min<std::size_t>(workers, n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([n, &next, &fn] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace oscint
