// parallel.hpp — deterministic block-parallel helper: workers pull block
// indices from a counter, results are merged by the caller in block order.
#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace mfa {

template <class Fn>
void run_blocks(int workers, int num_blocks, Fn&& fn) {
    if (workers <= 1 || num_blocks <= 1) {
        for (int b = 0; b < num_blocks; ++b) fn(b);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int b = next.fetch_add(1);
            if (b >= num_blocks) return;
            fn(b);
        }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min(workers, num_blocks);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace mfa
