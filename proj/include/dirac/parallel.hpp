#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dirac {

// Runs fn(0..n-1) across at most `threads` workers in fixed contiguous chunks.
// Workers must write only to their own slots; chunking never depends on timing,
// so results are identical for every thread count.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& fn) {
    if (threads == 0)
        threads = std::thread::hardware_concurrency();
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers)
                    fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);
}

}  // namespace dirac
