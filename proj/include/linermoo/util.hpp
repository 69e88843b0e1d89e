#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace linermoo {

// Worker count for parallel solution evaluation. Defaults to 1; the
// LINERMOO_THREADS environment variable raises (or caps) it. Results are
// independent of the value: evaluation is pure and lands in fixed slots.
inline int thread_cap() {
    if (const char* env = std::getenv("LINERMOO_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    return 1;
}

// Runs fn(i) for i in [0, n). With threads <= 1 this is a plain loop.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace linermoo
