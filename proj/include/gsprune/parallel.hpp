#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace gsprune {

inline int default_thread_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int resolve_threads(int requested) {
    return requested > 0 ? requested : default_thread_count();
}

// Runs fn(begin, end) over disjoint contiguous chunks of [first, last).
// Chunk boundaries depend only on the range and thread count; callers that
// need results independent of the thread count must make per-element work
// independent (e.g. write to disjoint slots) rather than rely on chunking.
template <typename Fn>
void parallel_for_chunks(std::size_t first, std::size_t last, int threads, Fn&& fn) {
    const std::size_t count = last > first ? last - first : 0;
    if (count == 0) return;
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
    if (nthreads <= 1) {
        fn(first, last);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t base = count / nthreads;
    const std::size_t rem = count % nthreads;
    std::size_t begin = first;
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t len = base + (t < rem ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

// Element-wise parallel loop: fn(i) for i in [first, last).
template <typename Fn>
void parallel_for(std::size_t first, std::size_t last, int threads, Fn&& fn) {
    parallel_for_chunks(first, last, threads, [&fn](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) fn(i);
    });
}

// Sorts [data.begin(), data.end()) with a chunked merge sort.  The result is
// the unique ascending order under `less`, so it does not depend on the
// thread count (ties between equivalent elements must not exist or must not
// matter to the caller).
template <typename T, typename Less>
void parallel_sort(std::vector<T>& data, int threads, Less less) {
    const std::size_t n = data.size();
    const int nthreads = resolve_threads(threads);
    if (n < 1u << 16 || nthreads <= 1) {
        std::sort(data.begin(), data.end(), less);
        return;
    }
    const std::size_t nchunks = std::min<std::size_t>(static_cast<std::size_t>(nthreads), 64);
    std::vector<std::size_t> bounds(nchunks + 1);
    for (std::size_t c = 0; c <= nchunks; ++c)
        bounds[c] = n * c / nchunks;
    parallel_for(0, nchunks, static_cast<int>(nchunks), [&](std::size_t c) {
        std::sort(data.begin() + bounds[c], data.begin() + bounds[c + 1], less);
    });
    for (std::size_t width = 1; width < nchunks; width *= 2) {
        std::vector<std::size_t> merges;
        for (std::size_t c = 0; c + width < nchunks; c += 2 * width) merges.push_back(c);
        parallel_for(0, merges.size(), static_cast<int>(merges.size()), [&](std::size_t m) {
            const std::size_t c = merges[m];
            const std::size_t hi = std::min(c + 2 * width, nchunks);
            std::inplace_merge(data.begin() + bounds[c], data.begin() + bounds[c + width],
                               data.begin() + bounds[hi], less);
        });
    }
}

} // namespace gsprune
