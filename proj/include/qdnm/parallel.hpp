#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qdnm {

// Runs fn(i) for i in [begin, end) on up to `threads` workers (0 = all
// hardware threads). Work items are claimed from a shared counter; callers
// must write results keyed by index so output is identical for any schedule.
inline void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn) {
    if (end <= begin) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned n_workers = threads <= 0 ? hw : static_cast<unsigned>(threads);
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(end - begin));
    if (n_workers <= 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<int> next(begin);
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= end) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace qdnm
