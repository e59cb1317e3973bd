#ifndef MARYLAND_PARALLEL_HPP
#define MARYLAND_PARALLEL_HPP

#include <exception>
#include <thread>
#include <vector>

namespace maryland {

// Index-partitioned parallel loop.  Each index writes only its own slot, so
// results are bit-identical for any thread count; the first exception (in
// index order within a worker) is rethrown on the caller thread.
template <class F>
void parallel_for(int begin, int end, int threads, F&& body) {
    if (threads <= 1 || end - begin <= 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    int nw = std::min<int>(threads, end - begin);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = begin + w; i < end; i += nw) body(i);
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace maryland

#endif
