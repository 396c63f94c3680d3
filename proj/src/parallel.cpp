#include "rlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rlab {

namespace {
std::atomic<int> g_threads{1};
}

void set_default_threads(int threads) { g_threads = std::max(1, threads); }

int default_threads() { return g_threads.load(); }

void parallel_blocks(std::size_t count, std::size_t block,
                     const std::function<void(std::size_t, std::size_t)>& body, int threads) {
    if (count == 0) return;
    if (block == 0) block = 1;
    if (threads <= 0) threads = default_threads();
    std::size_t nblocks = (count + block - 1) / block;
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), nblocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) body(b * block, std::min(count, (b + 1) * block));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            try {
                body(b * block, std::min(count, (b + 1) * block));
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next = nblocks;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace rlab
