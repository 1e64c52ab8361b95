// Copyright 2026 The ckt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ckt {

/// Resolves a requested worker count; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/**
 * Runs fn(chunk_index) for chunk_index in [0, chunks) on up to `threads`
 * workers. Chunks are claimed dynamically; callers that need deterministic
 * output must write per-chunk results and merge them in chunk order.
 * The first exception thrown by any worker is rethrown here.
 */
template <typename Fn>
void parallel_chunks(std::size_t chunks, unsigned threads, Fn &&fn) {
    threads = std::max(1u, std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
    if (threads == 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) return;
                try {
                    fn(c);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    next.store(chunks);
                    return;
                }
            }
        });
    }
    for (auto &th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ckt
