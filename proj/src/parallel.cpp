#include "pyrafuse/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pyrafuse {

namespace {

std::size_t auto_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::size_t from_environment() {
    const char* env = std::getenv("PYRAFUSE_THREADS");
    if (env == nullptr) return auto_workers();
    try {
        const long value = std::stol(env);
        if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
    return auto_workers();
}

std::atomic<std::size_t>& configured() {
    static std::atomic<std::size_t> workers{from_environment()};
    return workers;
}

}  // namespace

std::size_t worker_count() { return configured().load(); }

void set_worker_count(std::size_t workers) {
    configured().store(workers == 0 ? auto_workers() : workers);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace pyrafuse
