#include "graphbell/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace graphbell {

int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GRAPHBELL_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_chunks(std::int64_t count, int workers,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn) {
    workers = std::max<int>(1, static_cast<int>(std::min<std::int64_t>(workers, count)));
    if (workers <= 1) {
        if (count > 0) fn(0, 0, count);
        return;
    }
    const std::int64_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::int64_t begin = w * chunk;
        const std::int64_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([=, &fn] { fn(w, begin, end); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace graphbell
