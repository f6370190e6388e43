#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace obspec::detail {

inline std::atomic<int>& max_threads() {
    static std::atomic<int> n{static_cast<int>(
        std::max(1u, std::thread::hardware_concurrency()))};
    return n;
}

// Static row partition; bodies must be independent (they are: assembly
// writes disjoint rows of an immutable-input matrix).
inline void parallel_for(int begin, int end, const std::function<void(int)>& body) {
    const int nt = std::min<int>(max_threads().load(), std::max(1, end - begin));
    if (nt <= 1 || end - begin < 32) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::atomic<int> next{begin};
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= end) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace obspec::detail

namespace obspec {
inline void set_max_threads(int n) { detail::max_threads().store(std::max(1, n)); }
}
