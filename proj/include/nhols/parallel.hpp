#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace nhols {

inline int default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(job) for job in [0, njobs) on a bounded pool of workers.
// Jobs must write to disjoint state; the static block partition keeps results
// independent of scheduling, so runs are reproducible at any thread count.
inline void parallel_for(int64_t njobs, int threads,
                         const std::function<void(int64_t)>& body) {
    if (njobs <= 0) return;
    if (threads <= 1 || njobs == 1) {
        for (int64_t j = 0; j < njobs; ++j) body(j);
        return;
    }
    const int nw = static_cast<int>(std::min<int64_t>(threads, njobs));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (int64_t j = w; j < njobs; j += nw) body(j);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nhols
