#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bigmodel {

/// Runs `body(i)` for every i in [0, count) on up to `jobs` threads.
///
/// Work is handed out in fixed contiguous blocks, so each index is processed
/// exactly once regardless of `jobs`. Callers that write only to slot `i`
/// of a preallocated output get results independent of the thread count.
/// The first exception thrown by any worker is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
    if (count == 0) {
        return;
    }
    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t block = (count + workers - 1) / workers;
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(count, begin + block);
            if (begin >= end) {
                break;
            }
            threads.emplace_back([&, begin, end] {
                try {
                    for (std::size_t i = begin; i < end; ++i) {
                        body(i);
                    }
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace bigmodel
