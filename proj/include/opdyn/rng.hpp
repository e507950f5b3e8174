#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace opdyn {

/// Counter-based random stream keyed by (experiment seed, trial index, lane).
///
/// A lane is usually an agent index; kSharedLane is used for draws that belong to the
/// trial as a whole (state of the world, edge choices). Two streams with the same key
/// produce the same sequence regardless of which thread creates them or in which order,
/// so Monte Carlo estimates do not depend on the worker count.
class Stream {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kSharedLane = std::numeric_limits<std::uint64_t>::max();

    Stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t lane = kSharedLane)
        : key_(mix(mix(mix(seed ^ 0x6a09e667f3bcc909ull) ^ trial) ^ lane)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = (*this)();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (one variate per call).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t draws() const { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace opdyn
