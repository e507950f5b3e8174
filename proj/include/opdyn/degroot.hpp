#pragma once

// DeGroot repeated averaging: A^i_t = sum_{j in N(i)} w(i,j) A^j_{t-1}.

#include "opdyn/linalg.hpp"
#include "opdyn/montecarlo.hpp"
#include "opdyn/network.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/stats.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace opdyn::degroot {

/// One synchronous averaging round. T is double or Rational.
template <typename T>
std::vector<T> step(const Network& net, std::span<const T> actions) {
    if (actions.size() != net.size()) throw std::invalid_argument("degroot::step: action vector has wrong dimension");
    std::vector<T> next(net.size(), T(0));
    for (Agent i = 0; i < net.size(); ++i) {
        T acc(0);
        for (const auto& a : net.out(i)) {
            if constexpr (std::is_same_v<T, Rational>) acc += a.weight * actions[a.target];
            else acc += a.value * actions[a.target];
        }
        next[i] = acc;
    }
    return next;
}

template <typename T>
std::vector<T> step(const Network& net, const std::vector<T>& actions) {
    return step<T>(net, std::span<const T>(actions));
}

/// Rows of actions for rounds 0..horizon.
inline std::vector<std::vector<double>> trajectory(const Network& net, std::vector<double> initial, std::size_t horizon) {
    std::vector<std::vector<double>> rows{initial};
    for (std::size_t t = 0; t < horizon; ++t) rows.push_back(step(net, rows.back()));
    return rows;
}

/// A_inf = sum_i alpha_i A^i_0, valid for any real starting actions.
inline double limit(const Network& net, std::span<const double> initial, const StationaryDistribution& stationary) {
    if (initial.size() != net.size()) throw std::invalid_argument("degroot::limit: dimension mismatch");
    double s = 0.0;
    for (Agent i = 0; i < net.size(); ++i) s += stationary.alpha[i] * initial[i];
    return s;
}

inline double limit(const Network& net, std::span<const double> initial) {
    return limit(net, initial, stationary_distribution(net));
}

inline Rational limit_exact(const Network& net, std::span<const Rational> initial) {
    if (initial.size() != net.size()) throw std::invalid_argument("degroot::limit_exact: dimension mismatch");
    require_valid(net, true);
    if (!net.exact()) throw std::invalid_argument("degroot::limit_exact: network weights are not exact");
    const auto alpha = stationary_exact(net);
    Rational s = 0;
    for (Agent i = 0; i < net.size(); ++i) s += alpha[i] * initial[i];
    return s;
}

struct MixedRun {
    std::vector<double> actions;
    std::size_t rounds = 0;
    double tv = 1.0;  // max over starts of the mixing distance at `rounds`
    bool mixed = false;
};

/// Iterates until the chain has mixed: max_i d_TV(P^t(i, .), alpha) <= tv_threshold.
inline MixedRun run_until_mixed(const Network& net, std::vector<double> initial, double tv_threshold,
                                std::size_t round_cap = 1'000'000) {
    require_valid(net, true);
    if (initial.size() != net.size()) throw std::invalid_argument("degroot::run_until_mixed: dimension mismatch");
    const auto stationary = stationary_distribution(net);
    MixingTracker tracker(net, stationary.alpha);
    MixedRun run{std::move(initial), 0, tracker.max_tv(), false};
    while (run.tv > tv_threshold && run.rounds < round_cap) {
        run.actions = step(net, run.actions);
        tracker.step();
        ++run.rounds;
        run.tv = tracker.max_tv();
    }
    run.mixed = run.tv <= tv_threshold;
    return run;
}

// ---------------------------------------------------------------------------------------
// Learning probability p_w(delta) = P(round(A_inf) = S) under Bernoulli(delta) signals.
// round(1/2) is the value 1/2, which equals neither state: ties are reported separately.

inline constexpr std::size_t kExactLearningLimit = 20;

/// Success/tie counts by the number of signals equal to S. Conditioned on S, the limit
/// under S = 0 mirrors the limit under S = 1, so the counts for S = 1 suffice.
struct LearningPolynomial {
    std::size_t n = 0;
    std::vector<std::uint64_t> successes;  // by number of ones k
    std::vector<std::uint64_t> ties;

    static Rational weight(std::size_t n, std::size_t k, const Rational& q) {
        return pow(q, static_cast<unsigned>(k)) * pow(1 - q, static_cast<unsigned>(n - k));
    }

    Rational success(const Rational& delta) const { return evaluate(successes, delta); }
    Rational tie(const Rational& delta) const { return evaluate(ties, delta); }

private:
    Rational evaluate(const std::vector<std::uint64_t>& counts, const Rational& delta) const {
        if (delta < 0 || delta > Rational(1, 2)) throw std::invalid_argument("learning probability: delta must lie in [0, 1/2]");
        const Rational q = Rational(1, 2) + delta;
        Rational total = 0;
        for (std::size_t k = 0; k <= n; ++k)
            if (counts[k]) total += Rational(static_cast<unsigned long>(counts[k])) * weight(n, k, q);
        return total;
    }
};

/// Exhaustive pass over the 2^n signal vectors with exact stationary weights.
inline LearningPolynomial learning_polynomial(const Network& net) {
    const std::size_t n = net.size();
    if (n > kExactLearningLimit) throw std::length_error("degroot::learning_polynomial: exact mode supports n <= 20");
    require_valid(net, true);
    if (!net.exact()) throw std::invalid_argument("degroot::learning_polynomial: network weights are not exact");
    const auto alpha = stationary_exact(net);

    // Scale to integers: a_i = alpha_i * D. Success iff 2 * sum a_i x_i > D.
    Integer d = 1;
    for (const auto& a : alpha) d = lcm(d, Integer(a.get_den()));
    std::vector<Integer> scaled;
    for (const auto& a : alpha) scaled.push_back(Integer(a.get_num()) * (d / a.get_den()));

    LearningPolynomial poly{n, std::vector<std::uint64_t>(n + 1, 0), std::vector<std::uint64_t>(n + 1, 0)};
    const bool small = d.fits_slong_p() && d < Integer(1L << 40);
    std::vector<long> small_scaled;
    if (small)
        for (const auto& s : scaled) small_scaled.push_back(s.get_si());
    const long d_small = small ? d.get_si() : 0;

    // Gray-code walk keeps the weighted sum incremental.
    long sum_small = 0;
    Integer sum_big = 0;
    std::uint64_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t g = 0; g < total; ++g) {
        if (g > 0) {
            const int bit = __builtin_ctzll(g);
            const bool on = !((mask >> bit) & 1u);
            mask ^= std::uint64_t{1} << bit;
            if (small) sum_small += on ? small_scaled[bit] : -small_scaled[bit];
            else sum_big += on ? scaled[bit] : -scaled[bit];
        }
        const std::size_t k = static_cast<std::size_t>(__builtin_popcountll(mask));
        int cmp;
        if (small) cmp = (2 * sum_small > d_small) - (2 * sum_small < d_small);
        else cmp = ::cmp(2 * sum_big, d);
        if (cmp > 0) ++poly.successes[k];
        else if (cmp == 0) ++poly.ties[k];
    }
    return poly;
}

struct LearningEstimate {
    bool exact = false;
    Rational success;  // exact mode
    Rational tie;      // exact mode
    Proportion mc_success;
    Proportion mc_tie;
    double estimate() const { return exact ? to_double(success) : mc_success.estimate(); }
};

inline LearningEstimate learning_probability_exact(const Network& net, const Rational& delta) {
    auto poly = learning_polynomial(net);
    LearningEstimate e;
    e.exact = true;
    e.success = poly.success(delta);
    e.tie = poly.tie(delta);
    return e;
}

/// Monte Carlo estimate with per-trial streams (state on the shared lane, signal i on lane i).
inline LearningEstimate learning_probability_mc(const Network& net, const Rational& delta, std::uint64_t trials,
                                                std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("degroot::learning_probability_mc: trials must be positive");
    const auto stationary = stationary_distribution(net);
    const auto model = SignalModel::bernoulli(delta);
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        const auto world = sample_world(model, net.size(), seed, t);
        double a = 0.0;
        for (Agent i = 0; i < net.size(); ++i) a += stationary.alpha[i] * static_cast<double>(world.symbols[i]);
        // Guard the tie band against float noise; exact ties only arise for rational alpha.
        if (std::abs(a - 0.5) <= 1e-12) ++acc[1];
        else if ((a > 0.5 ? 1 : 0) == world.state) ++acc[0];
    });
    LearningEstimate e;
    e.mc_success = {counts.get(0), trials};
    e.mc_tie = {counts.get(1), trials};
    return e;
}

/// Lower bound on p_w(delta) from Hoeffding's inequality: 1 - exp(-2 delta^2 / sum alpha_i^2).
inline double hoeffding_success_bound(std::span<const double> alpha, double delta) {
    double s2 = 0.0, total = 0.0;
    for (double a : alpha) {
        if (a < 0) throw std::invalid_argument("hoeffding_success_bound: alpha must be nonnegative");
        s2 += a * a;
        total += a;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("hoeffding_success_bound: alpha must sum to 1");
    return 1.0 - std::exp(-2.0 * delta * delta / s2);
}

/// Limit under the monotone coupling: psi_i = S when u_i < 1/2 + delta, else 1 - S.
inline double coupled_limit(std::span<const double> alpha, int state, std::span<const double> uniforms, double delta) {
    double a = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const int signal = uniforms[i] < 0.5 + delta ? state : 1 - state;
        a += alpha[i] * signal;
    }
    return a;
}

// ---------------------------------------------------------------------------------------
// Cheaters: agents that play a fixed action forever.

struct CheaterRun {
    std::vector<double> actions;
    std::size_t rounds = 0;
    bool converged = false;
};

inline void check_cheaters(const Network& net, const auto& cheaters) {
    if (cheaters.size() >= net.size()) throw std::invalid_argument("cheaters: at least one honest agent is required");
    for (const auto& [agent, value] : cheaters) {
        if (agent >= net.size()) throw std::out_of_range("cheaters: agent out of range");
        if (value < 0 || value > 1) throw std::invalid_argument("cheaters: fixed value must lie in [0,1]");
    }
}

/// Simulates until successive rounds differ by at most tol in sup norm, or `horizon` rounds.
inline CheaterRun run_with_cheaters(const Network& net, std::vector<double> signals, const std::map<Agent, double>& cheaters,
                                    std::size_t horizon, double tol) {
    require_valid(net, true);
    check_cheaters(net, cheaters);
    if (signals.size() != net.size()) throw std::invalid_argument("run_with_cheaters: dimension mismatch");
    for (const auto& [agent, value] : cheaters) signals[agent] = value;
    CheaterRun run{std::move(signals), 0, false};
    while (run.rounds < horizon) {
        auto next = step(net, run.actions);
        for (const auto& [agent, value] : cheaters) next[agent] = value;
        double change = 0.0;
        for (Agent i = 0; i < net.size(); ++i) change = std::max(change, std::abs(next[i] - run.actions[i]));
        run.actions = std::move(next);
        ++run.rounds;
        if (change <= tol) {
            run.converged = true;
            break;
        }
    }
    return run;
}

/// Limits via absorption: honest agent i converges to sum_c h(i,c) value(c), where h are
/// the hitting probabilities of the cheater set for the walk driven by the weights.
inline std::vector<Rational> cheater_limits_exact(const Network& net, const std::map<Agent, Rational>& cheaters) {
    require_valid(net, true);
    check_cheaters(net, cheaters);
    if (!net.exact()) throw std::invalid_argument("cheater_limits_exact: network weights are not exact");
    std::vector<Agent> honest;
    std::vector<std::size_t> index(net.size(), net.size());
    for (Agent i = 0; i < net.size(); ++i)
        if (!cheaters.count(i)) {
            index[i] = honest.size();
            honest.push_back(i);
        }
    const std::size_t m = honest.size();
    linalg::RationalMatrix a(m, std::vector<Rational>(m));
    std::vector<Rational> b(m, Rational(0));
    for (std::size_t r = 0; r < m; ++r) {
        a[r][r] += 1;
        for (const auto& arc : net.out(honest[r])) {
            if (auto c = cheaters.find(arc.target); c != cheaters.end()) b[r] += arc.weight * c->second;
            else a[r][index[arc.target]] -= arc.weight;
        }
    }
    auto x = linalg::solve(std::move(a), std::move(b));
    std::vector<Rational> out(net.size());
    for (Agent i = 0; i < net.size(); ++i) {
        if (auto c = cheaters.find(i); c != cheaters.end()) out[i] = c->second;
        else out[i] = x[index[i]];
    }
    return out;
}

} // namespace opdyn::degroot
