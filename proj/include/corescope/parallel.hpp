#ifndef CORESCOPE_PARALLEL_HPP
#define CORESCOPE_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace corescope
{
    /// Worker cap: CORESCOPE_THREADS if set, otherwise hardware concurrency.
    inline unsigned thread_count()
    {
        if (const char *env = std::getenv("CORESCOPE_THREADS"))
        {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1)
                return static_cast<unsigned>(v);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }

    /// Static block partition of [0, count) across workers. Each index is
    /// processed exactly once; fn must write only to its own output slots, so
    /// results never depend on the number of workers.
    template <typename Fn>
    void parallel_for(std::size_t count, Fn &&fn, unsigned workers = 0)
    {
        if (workers == 0)
            workers = thread_count();
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (count + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w)
        {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(count, lo + chunk);
            if (lo >= hi)
                break;
            pool.emplace_back([lo, hi, &fn] {
                for (std::size_t i = lo; i < hi; ++i)
                    fn(i);
            });
        }
        for (auto &t : pool)
            t.join();
    }

} // namespace corescope

#endif // CORESCOPE_PARALLEL_HPP
