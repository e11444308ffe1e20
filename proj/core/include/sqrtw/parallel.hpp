#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sqrtw {

/// Number of workers to use when the caller passes 0.
inline unsigned default_threads() noexcept {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs body(begin, end, worker) over [0, n) in chunks of `chunk` items.
///
/// Chunks are handed out dynamically, so the assignment of items to workers
/// is not deterministic. Callers must write results into per-item slots and
/// reduce them afterwards in index order; that keeps every result
/// independent of `threads`. The first exception thrown by a worker is
/// rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, std::size_t chunk, Body&& body) {
    if (n == 0) return;
    if (threads == 0) threads = default_threads();
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n_chunks));

    if (workers <= 1) {
        for (std::size_t b = 0; b < n; b += chunk) body(b, std::min(n, b + chunk), 0u);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&](unsigned worker) {
        try {
            for (;;) {
                const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= n_chunks) break;
                const std::size_t b = c * chunk;
                body(b, std::min(n, b + chunk), worker);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(n_chunks, std::memory_order_relaxed);
        }
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
        run(0);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace sqrtw
