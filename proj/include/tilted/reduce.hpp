#pragma once

// Deterministic parallel loops and sums. Work is cut into fixed-size blocks
// independent of the worker count, blocks are summed sequentially, and block
// partials are combined with a fixed pairwise tree, so results are
// bit-identical for any number of threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace tilted {

inline constexpr std::size_t kReduceBlock = 1024;

// Calls body(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any call is rethrown on the calling thread.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline void pairwise_combine(std::vector<std::vector<double>>& parts) {
    while (parts.size() > 1) {
        std::vector<std::vector<double>> next;
        next.reserve((parts.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            auto merged = std::move(parts[i]);
            for (std::size_t k = 0; k < merged.size(); ++k) merged[k] += parts[i + 1][k];
            next.push_back(std::move(merged));
        }
        if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
        parts = std::move(next);
    }
}

// Returns sum over i in [0, count) of the width-sized vectors written by
// term(i, out); `out` is zeroed before each call and accumulated afterwards.
inline std::vector<double> blocked_sum(std::size_t count, std::size_t width, unsigned threads,
                                       const std::function<void(std::size_t, std::span<double>)>& term) {
    const std::size_t blocks = (count + kReduceBlock - 1) / kReduceBlock;
    std::vector<std::vector<double>> partial(blocks, std::vector<double>(width, 0.0));
    parallel_for(blocks, threads, [&](std::size_t b) {
        std::vector<double> scratch(width);
        auto& acc = partial[b];
        const std::size_t end = std::min(count, (b + 1) * kReduceBlock);
        for (std::size_t i = b * kReduceBlock; i < end; ++i) {
            std::fill(scratch.begin(), scratch.end(), 0.0);
            term(i, scratch);
            for (std::size_t k = 0; k < width; ++k) acc[k] += scratch[k];
        }
    });
    if (partial.empty()) return std::vector<double>(width, 0.0);
    pairwise_combine(partial);
    return partial.front();
}

}  // namespace tilted
