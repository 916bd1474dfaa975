#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace bohr {

// Applies fn to every index in [0, count) across `workers` threads and returns
// results in index order, so reductions are independent of completion order.
template <typename R>
std::vector<R> parallel_map(size_t count, unsigned workers, const std::function<R(size_t)>& fn) {
    std::vector<R> out(count);
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; i++) out[i] = fn(i);
        return out;
    }
    std::atomic<size_t> next{0};
    auto run = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(count));
    pool.reserve(n);
    for (unsigned t = 0; t < n; t++) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    return out;
}

} // namespace bohr
