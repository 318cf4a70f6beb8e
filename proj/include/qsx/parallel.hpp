// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 qsx Contributors

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qsx {

/// Number of shards parallel_chunks will use for `count` items and the
/// requested thread budget. Callers size per-shard accumulators with this
/// before launching.
inline unsigned shard_count(std::size_t count, unsigned threads) {
    if (count == 0) return 0;
    const std::size_t n = std::min<std::size_t>(std::max(1u, threads), count);
    return static_cast<unsigned>(n);
}

/// Runs fn(begin, end, shard) over contiguous shards of [0, count).
/// Shard boundaries depend only on (count, threads), so a worker's slice is
/// reproducible. With threads <= 1 everything runs inline on the caller.
inline void parallel_chunks(std::size_t count, unsigned threads,
                            const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
    const unsigned shards = shard_count(count, threads);
    if (shards == 0) return;
    if (shards == 1) {
        fn(0, count, 0);
        return;
    }
    const std::size_t base = count / shards;
    const std::size_t extra = count % shards;
    std::vector<std::thread> pool;
    pool.reserve(shards);
    std::size_t begin = 0;
    for (unsigned s = 0; s < shards; ++s) {
        const std::size_t len = base + (s < extra ? 1 : 0);
        pool.emplace_back(fn, begin, begin + len, s);
        begin += len;
    }
    for (auto& t : pool) t.join();
}

}  // namespace qsx
