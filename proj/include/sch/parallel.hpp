#ifndef SCH_PARALLEL_HPP
#define SCH_PARALLEL_HPP

#include <atomic>
#include <mutex>
#include <thread>

#include "sch/common.hpp"

namespace sch {

// Work pool over an index range.  Each index's work is self-contained (sweep
// points are embarrassingly parallel); results are stored per index by the
// caller, so output order and file bytes do not depend on the thread count.
template <class F>
inline void parallel_for_index(std::size_t count, int threads, F&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(
        std::min<std::size_t>(count, static_cast<std::size_t>(threads)));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error = nullptr;
    std::mutex err_mu;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sch

#endif
