#pragma once

#include <cstddef>
#include <functional>

namespace rlab {

// Thread count used when a call passes threads <= 0.
void set_default_threads(int threads);
int default_threads();

// Calls body(begin, end) over contiguous blocks covering [0, count).
// Blocks are fixed by (count, block) alone, so any per-index output written
// by body is independent of the number of threads.
void parallel_blocks(std::size_t count, std::size_t block,
                     const std::function<void(std::size_t, std::size_t)>& body,
                     int threads = 0);

inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                         int threads = 0) {
    parallel_blocks(
        count, 1,
        [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) body(i);
        },
        threads);
}

}  // namespace rlab
