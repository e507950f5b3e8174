#pragma once

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace opdyn {

struct Interval {
    double low = 0.0;
    double high = 0.0;
    double half_width() const { return 0.5 * (high - low); }
    bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    if (successes > trials) throw std::invalid_argument("wilson_interval: successes exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("wilson_interval: confidence must lie in (0,1)");
    const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + confidence / 2.0);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return Interval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Monte Carlo proportion with its 95% Wilson interval.
struct Proportion {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;

    double estimate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
    Interval interval(double confidence = 0.95) const { return wilson_interval(successes, trials, confidence); }

    /// |estimate - target| <= multiples * half-width of the 95% interval.
    bool within_half_widths(double target, double multiples = 3.0) const {
        return std::abs(estimate() - target) <= multiples * interval().half_width();
    }
};

} // namespace opdyn
