#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace p3pc {

/// Runs f(i) for i in [0, count) on up to `jobs` threads. Work is handed out
/// through a shared atomic index, so f must only write to slot i of its
/// outputs. The first exception thrown by any f is rethrown after join.
template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& f) {
    jobs = std::max(1u, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    {
        std::vector<std::jthread> threads;
        const auto n = std::min<std::size_t>(jobs, count);
        threads.reserve(n);
        for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace p3pc
