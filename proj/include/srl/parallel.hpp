#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace srl {

inline int hardware_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(worker, begin, end) over a deterministic contiguous partition of
// [0, n_items). The partition depends only on (n_items, n_workers), so
// per-worker accumulations reduced in worker order are reproducible for a
// fixed worker count. A worker exception is rethrown on the caller (first by
// worker order).
inline void parallel_chunks(int n_items, int n_workers,
                            const std::function<void(int, int, int)>& fn) {
    if (n_items <= 0) return;
    if (n_workers < 1) n_workers = 1;
    if (n_workers > n_items) n_workers = n_items;
    if (n_workers == 1) {
        fn(0, 0, n_items);
        return;
    }
    std::vector<std::exception_ptr> errors(n_workers);
    std::vector<std::thread> threads;
    threads.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
        const int begin = static_cast<int>(static_cast<long>(n_items) * w / n_workers);
        const int end = static_cast<int>(static_cast<long>(n_items) * (w + 1) / n_workers);
        threads.emplace_back([&fn, &errors, w, begin, end] {
            try {
                fn(w, begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace srl
