#ifndef KICKED_TOP_PARALLEL_HPP
#define KICKED_TOP_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace kicked_top
{
/// Worker count from KICKED_TOP_WORKERS, falling back to the hardware count.
inline int default_workers()
{
    if (const char* env = std::getenv("KICKED_TOP_WORKERS"))
    {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates f(0..n-1) on a bounded pool; result i always lands in slot i.
/// The first exception thrown by a job is rethrown after all workers join.
template < typename F >
auto parallel_map(std::size_t n, int workers, F&& f) -> std::vector< std::invoke_result_t< F&, std::size_t > >
{
    using R = std::invoke_result_t< F&, std::size_t >;
    std::vector< R > out(n);
    if (n == 0)
        return out;

    const auto pool = static_cast< std::size_t >(std::clamp(workers, 1, static_cast< int >(std::min< std::size_t >(n, 1024))));
    if (pool == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = f(i);
        return out;
    }

    std::atomic< std::size_t > next{0};
    std::exception_ptr         error;
    std::mutex                 error_mutex;
    auto                       worker = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                out[i] = f(i);
            }
            catch (...)
            {
                const std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };

    std::vector< std::thread > threads;
    threads.reserve(pool);
    for (std::size_t t = 0; t < pool; ++t)
        threads.emplace_back(worker);
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}
} // namespace kicked_top

#endif // KICKED_TOP_PARALLEL_HPP
