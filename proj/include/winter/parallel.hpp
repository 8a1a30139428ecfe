#pragma once

#include <cstdlib>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace winter {

// Worker count: WINTER_NLS_THREADS if set to a positive integer, else hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("WINTER_NLS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs body(i) for i in [0, n). Each index is processed exactly once; bodies must
// only write to per-index slots so the result is deterministic regardless of the
// thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = thread_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (unsigned w = 0; w < used; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += used) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace winter
