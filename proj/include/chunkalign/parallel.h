#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace chunkalign {

// Runs fn(0..count-1) across up to `jobs` threads. Indices are claimed from a
// shared counter, so callers must make fn(i) independent of execution order;
// results should land in preallocated slot i. jobs <= 1 runs inline.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (jobs <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    int workers = std::min(jobs, count);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto run = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace chunkalign
