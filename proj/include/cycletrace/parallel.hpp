#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cycletrace
{

/// Worker count: CYCLETRACE_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Results are
/// returned in index order; an exception thrown for index i is stored in
/// errors[i] instead of propagating.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t n, Fn fn, std::vector<std::exception_ptr>& errors)
{
    std::vector<Result> results(n);
    errors.assign(n, nullptr);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                results[i] = fn(i);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1)
    {
        worker();
        return results;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    pool.clear();
    return results;
}

} // namespace cycletrace
