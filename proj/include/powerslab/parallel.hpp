#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace powerslab {

inline unsigned default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1U : n;
}

// Splits [0, n) into chunks of fixed size (independent of the worker count),
// evaluates `chunk_fn(begin, end) -> Partial` on a pool of workers and folds
// the partials with `merge(acc, partial)` in ascending chunk order.
//
// Because chunk boundaries and fold order never depend on `workers`, the
// result is bit-identical for every worker count.
template <typename Partial, typename ChunkFn, typename MergeFn>
Partial chunked_reduce(std::uint64_t n, std::uint64_t chunk, unsigned workers, Partial init,
                       ChunkFn&& chunk_fn, MergeFn&& merge) {
    if (chunk == 0) chunk = 1;
    const std::uint64_t nchunks = (n + chunk - 1) / chunk;
    std::vector<Partial> partials(static_cast<std::size_t>(nchunks), init);
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(nchunks, 1))));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::uint64_t c = next++; c < nchunks; c = next++) {
                const std::uint64_t begin = c * chunk;
                const std::uint64_t end = std::min(n, begin + chunk);
                partials[static_cast<std::size_t>(c)] = chunk_fn(begin, end);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = nchunks;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    Partial acc = init;
    for (auto& p : partials) merge(acc, p);
    return acc;
}

}  // namespace powerslab
