#include "adrsplit/parallel.hpp"

#include "adrsplit/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adrsplit {

namespace {
std::atomic<int> g_workers{1};
}

int worker_count() { return g_workers.load(std::memory_order_relaxed); }

void set_worker_count(int workers) {
    if (workers < 1) {
        throw InvalidArgument("worker count must be at least 1");
    }
    g_workers.store(workers, std::memory_order_relaxed);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) {
            body(k);
        }
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t block = (count + workers - 1) / workers;

    auto run_block = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t k = begin; k < end; ++k) {
                body(k);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };

    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(count, begin + block);
            if (begin < end) {
                pool.emplace_back(run_block, begin, end);
            }
        }
        run_block(0, std::min(count, block));
    }

    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace adrsplit
