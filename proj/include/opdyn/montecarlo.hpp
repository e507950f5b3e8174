#pragma once

// Seeded Monte Carlo engine. Trials are split into contiguous blocks over a fixed
// number of workers; every trial draws from its own keyed Stream and contributes to an
// integer-valued accumulator, so the reduced result does not depend on scheduling.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace opdyn {

/// Worker count from OPDYN_WORKERS, else the hardware concurrency.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("OPDYN_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(trial, acc) for trial in [0, trials) and sums the per-worker accumulators.
/// Acc must be default-constructible and support `acc += other` exactly (integers).
template <typename Acc, typename Fn>
Acc run_trials(std::uint64_t trials, Fn&& fn, std::size_t workers = worker_count()) {
    workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(trials, 1)));
    std::vector<Acc> partial(workers);
    if (workers == 1) {
        for (std::uint64_t t = 0; t < trials; ++t) fn(t, partial[0]);
        return partial[0];
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    const std::uint64_t block = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::uint64_t begin = w * block, end = std::min<std::uint64_t>(trials, begin + block);
                for (std::uint64_t t = begin; t < end; ++t) fn(t, partial[w]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    Acc total{};
    for (auto& p : partial) total += p;
    return total;
}

/// Fixed-size vector of integer counters, the usual accumulator for run_trials.
struct Counters {
    std::vector<std::uint64_t> values;
    std::uint64_t& operator[](std::size_t k) {
        if (k >= values.size()) values.resize(k + 1, 0);
        return values[k];
    }
    std::uint64_t get(std::size_t k) const { return k < values.size() ? values[k] : 0; }
    Counters& operator+=(const Counters& o) {
        if (o.values.size() > values.size()) values.resize(o.values.size(), 0);
        for (std::size_t k = 0; k < o.values.size(); ++k) values[k] += o.values[k];
        return *this;
    }
};

} // namespace opdyn
