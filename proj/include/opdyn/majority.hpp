#pragma once

// Majority dynamics on +-1 spins: A^i_{t+1} = sgn sum_{j in N(i)} A^j_t.
// Needs an undirected network with odd |N(i)| (self-loop counted when present).

#include "opdyn/montecarlo.hpp"
#include "opdyn/network.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/stats.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace opdyn::majority {

using Spin = std::int8_t;
using Config = std::vector<Spin>;

/// Bit i of x set means spin +1 at agent i.
inline Config decode(std::uint64_t x, std::size_t n) {
    Config c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = ((x >> i) & 1u) ? 1 : -1;
    return c;
}

inline std::uint64_t encode(const Config& c) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] > 0) x |= std::uint64_t{1} << i;
    return x;
}

inline Config negate(Config c) {
    for (auto& s : c) s = static_cast<Spin>(-s);
    return c;
}

/// Bits {0,1} to spins {-1,+1}.
inline Config from_bits(const std::vector<std::uint8_t>& bits) {
    Config c;
    for (auto b : bits) c.push_back(b ? 1 : -1);
    return c;
}

inline void require_majority_network(const Network& net) {
    auto r = validate_odd_neighborhoods(net);
    if (!r.ok()) throw std::invalid_argument("majority dynamics: " + r.violations.front());
}

inline Config step(const Network& net, const Config& config) {
    if (config.size() != net.size()) throw std::invalid_argument("majority::step: config has wrong dimension");
    Config next(config.size());
    for (Agent i = 0; i < net.size(); ++i) {
        int sum = 0;
        for (const auto& a : net.out(i)) sum += config[a.target];
        if (sum == 0) throw std::domain_error("majority::step: even neighborhood produced a zero sum");
        next[i] = sum > 0 ? 1 : -1;
    }
    return next;
}

/// L_t = sum over arcs (i,j) of (A^i_{t+1} - A^j_t)^2. Arcs are ordered, self-loops included.
inline long lyapunov(const Network& net, const Config& cur, const Config& next) {
    long l = 0;
    for (Agent i = 0; i < net.size(); ++i)
        for (const auto& a : net.out(i)) {
            const long d = next[i] - cur[a.target];
            l += d * d;
        }
    return l;
}

/// J_t = sum_i (A^i_{t+1} - A^i_{t-1}) sum_{j in N(i)} A^j_t.
inline long j_functional(const Network& net, const Config& prev, const Config& cur, const Config& next) {
    long j = 0;
    for (Agent i = 0; i < net.size(); ++i) {
        long sum = 0;
        for (const auto& a : net.out(i)) sum += cur[a.target];
        j += (next[i] - prev[i]) * sum;
    }
    return j;
}

struct LimitCycle {
    Config even;  // A_{2t} for large t
    Config odd;   // A_{2t+1} for large t
    std::size_t entry_time = 0;  // least t with A_{t+2} = A_t
    std::size_t period = 1;
};

/// Runs until A_{t+2} = A_t. Termination is guaranteed by the Lyapunov argument; the cap is a guard.
inline LimitCycle run_to_cycle(const Network& net, const Config& config) {
    const std::size_t cap = 4 * net.arc_count() + 4;
    std::vector<Config> traj{config, step(net, config)};
    traj.push_back(step(net, traj[1]));
    std::size_t t = 0;
    while (traj[t + 2] != traj[t]) {
        ++t;
        if (t > cap) throw std::logic_error("majority::run_to_cycle: no period-two cycle within the Lyapunov bound");
        traj.push_back(step(net, traj.back()));
    }
    LimitCycle lc;
    lc.entry_time = t;
    lc.period = traj[t + 1] == traj[t] ? 1 : 2;
    lc.even = traj[t % 2 == 0 ? t : t + 1];
    lc.odd = traj[t % 2 == 0 ? t + 1 : t];
    return lc;
}

struct TrajectoryAudit {
    std::size_t entry_time = 0;
    std::size_t period = 1;
    bool identity_holds = true;  // L_t - L_{t-1} = -J_t at every step
    bool doubled_identity_holds = true;  // L_t - L_{t-1} = -2 J_t at every step
    bool j_nonnegative = true;
    bool j_zero_iff_period_two = true;
    bool l_nonincreasing = true;
    std::vector<long> l_values;
    std::vector<long> j_values;  // j_values[k] is J_{k+1}
};

/// Follows a trajectory through `extra` rounds past cycle entry and checks the Lyapunov relations.
inline TrajectoryAudit audit_trajectory(const Network& net, const Config& config, std::size_t extra = 2) {
    const auto lc = run_to_cycle(net, config);
    TrajectoryAudit audit;
    audit.entry_time = lc.entry_time;
    audit.period = lc.period;
    const std::size_t rounds = lc.entry_time + 2 + extra;
    std::vector<Config> traj{config};
    for (std::size_t t = 0; t < rounds + 1; ++t) traj.push_back(step(net, traj.back()));
    for (std::size_t t = 0; t < rounds; ++t) audit.l_values.push_back(lyapunov(net, traj[t], traj[t + 1]));
    for (std::size_t t = 1; t < rounds; ++t) {
        const long j = j_functional(net, traj[t - 1], traj[t], traj[t + 1]);
        audit.j_values.push_back(j);
        const long dl = audit.l_values[t] - audit.l_values[t - 1];
        if (dl != -j) audit.identity_holds = false;
        if (dl != -2 * j) audit.doubled_identity_holds = false;
        if (j < 0) audit.j_nonnegative = false;
        if ((j == 0) != (traj[t + 1] == traj[t - 1])) audit.j_zero_iff_period_two = false;
        if (dl > 0) audit.l_nonincreasing = false;
    }
    return audit;
}

// ---------------------------------------------------------------------------------------
// Limit-profile law and retention of information

inline constexpr std::size_t kExactRetentionLimit = 16;

/// For every limit profile (encoded even-time state): counts of initial configs by number of +1 spins.
struct LimitLaw {
    std::size_t n = 0;
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_profile;
    std::vector<std::uint64_t> limit_of;  // limit profile of each initial config
};

inline LimitLaw limit_law(const Network& net) {
    require_majority_network(net);
    const std::size_t n = net.size();
    if (n > kExactRetentionLimit) throw std::length_error("majority: exact enumeration supports n <= 16");
    LimitLaw law;
    law.n = n;
    law.limit_of.resize(std::size_t{1} << n);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto lc = run_to_cycle(net, decode(x, n));
        const std::uint64_t key = encode(lc.even);
        law.limit_of[x] = key;
        auto& counts = law.by_profile[key];
        if (counts.empty()) counts.assign(n + 1, 0);
        ++counts[static_cast<std::size_t>(__builtin_popcountll(x))];
    }
    return law;
}

/// P(profile, S = +1) and P(profile, S = -1) up to the common factor 1/2.
inline std::pair<Rational, Rational> profile_weights(const std::vector<std::uint64_t>& counts, const Rational& q) {
    const std::size_t n = counts.size() - 1;
    Rational plus = 0, minus = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (!counts[k]) continue;
        const Rational c(static_cast<unsigned long>(counts[k]));
        plus += c * pow(q, static_cast<unsigned>(k)) * pow(1 - q, static_cast<unsigned>(n - k));
        minus += c * pow(1 - q, static_cast<unsigned>(k)) * pow(q, static_cast<unsigned>(n - k));
    }
    return {plus, minus};
}

struct Retention {
    Rational error;                           // iota(G, delta)
    std::map<std::uint64_t, int> map_rule;    // MAP estimate per limit profile; 0 on a tie
};

/// Exact iota(G, delta) = P(MAP(A_inf) != S) with signals P(psi_i = S) = 1/2 + delta.
/// A posterior tie contributes 1/2 of its mass to the error.
inline Retention retention_exact(const LimitLaw& law, const Rational& delta) {
    if (delta < 0 || delta > Rational(1, 2)) throw std::invalid_argument("retention: delta must lie in [0, 1/2]");
    const Rational q = Rational(1, 2) + delta;
    Retention r;
    r.error = 0;
    for (const auto& [profile, counts] : law.by_profile) {
        const auto [plus, minus] = profile_weights(counts, q);
        r.error += Rational(1, 2) * (plus < minus ? plus : minus);
        r.map_rule[profile] = plus > minus ? 1 : (plus < minus ? -1 : 0);
    }
    return r;
}

inline Retention retention_exact(const Network& net, const Rational& delta) { return retention_exact(limit_law(net), delta); }

/// Monte Carlo error of the majority-of-limit-actions estimator (odd n).
inline Proportion retention_mc(const Network& net, const Rational& delta, std::uint64_t trials, std::uint64_t seed) {
    require_majority_network(net);
    if (net.size() % 2 == 0) throw std::invalid_argument("retention_mc: majority vote needs odd n");
    const auto model = SignalModel::bernoulli(delta);
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        const auto world = sample_world(model, net.size(), seed, t);
        const auto lc = run_to_cycle(net, from_bits({world.symbols.begin(), world.symbols.end()}));
        int sum = 0;
        for (auto s : lc.even) sum += s;
        const int estimate = sum > 0 ? 1 : 0;
        if (estimate != world.state) ++acc[0];
    });
    return {counts.get(0), trials};
}

// ---------------------------------------------------------------------------------------
// Boolean functions on {-1,+1}^n, stored as truth tables indexed by encode().

using TruthTable = std::vector<Spin>;

inline TruthTable truth_table(const std::function<Spin(const Config&)>& f, std::size_t n) {
    if (n > 20) throw std::length_error("truth_table: n must be <= 20");
    TruthTable t(std::size_t{1} << n);
    for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = f(decode(x, n));
    return t;
}

inline std::size_t arity(const TruthTable& f) {
    const auto n = static_cast<std::size_t>(std::countr_zero(f.size()));
    if ((std::size_t{1} << n) != f.size()) throw std::invalid_argument("truth table size is not a power of two");
    return n;
}

/// Signals -> sgn(sum of limit actions). Defined for odd n.
inline TruthTable limit_majority_function(const Network& net) {
    require_majority_network(net);
    if (net.size() % 2 == 0) throw std::invalid_argument("limit_majority_function: n must be odd");
    return truth_table(
        [&](const Config& c) -> Spin {
            int sum = 0;
            for (auto s : run_to_cycle(net, c).even) sum += s;
            return sum > 0 ? 1 : -1;
        },
        net.size());
}

inline bool is_odd(const TruthTable& f) {
    const std::uint64_t mask = f.size() - 1;
    for (std::uint64_t x = 0; x < f.size(); ++x)
        if (f[x ^ mask] != -f[x]) return false;
    return true;
}

inline bool is_monotone(const TruthTable& f) {
    const std::size_t n = arity(f);
    for (std::uint64_t x = 0; x < f.size(); ++x)
        for (std::size_t i = 0; i < n; ++i)
            if (!((x >> i) & 1u) && f[x | (std::uint64_t{1} << i)] < f[x]) return false;
    return true;
}

/// Oddness and monotonicity of a MAP rule over the limit profiles it is defined on.
/// Monotonicity is checked between profiles differing in one coordinate.
struct MapProperties {
    bool odd = true;
    bool monotone = true;
};

inline MapProperties map_properties(const std::map<std::uint64_t, int>& rule, std::size_t n) {
    MapProperties p;
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    for (const auto& [a, v] : rule) {
        if (auto it = rule.find(a ^ mask); it != rule.end() && it->second != -v) p.odd = false;
        for (std::size_t i = 0; i < n; ++i) {
            if ((a >> i) & 1u) continue;
            if (auto it = rule.find(a | (std::uint64_t{1} << i)); it != rule.end() && it->second < v) p.monotone = false;
        }
    }
    return p;
}

/// P_delta(X = x) with P(X_i = +1) = 1/2 + delta, independently.
inline Rational config_probability(std::uint64_t x, std::size_t n, const Rational& delta) {
    const Rational q = Rational(1, 2) + delta;
    const auto k = static_cast<unsigned>(__builtin_popcountll(x));
    return pow(q, k) * pow(1 - q, static_cast<unsigned>(n) - k);
}

/// I_i = P_delta(f(tau_i X) != f(X)), exact.
inline Rational influence(const TruthTable& f, std::size_t i, const Rational& delta) {
    const std::size_t n = arity(f);
    if (i >= n) throw std::out_of_range("influence: coordinate out of range");
    Rational total = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x)
        if (f[x] != f[x ^ (std::uint64_t{1} << i)]) total += config_probability(x, n, delta);
    return total;
}

/// Monte Carlo influence estimate.
inline Proportion influence_mc(const TruthTable& f, std::size_t i, double delta, std::uint64_t trials, std::uint64_t seed) {
    const std::size_t n = arity(f);
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        std::uint64_t x = 0;
        for (std::size_t k = 0; k < n; ++k) {
            Stream lane(seed, t, k);
            if (lane.bernoulli(0.5 + delta)) x |= std::uint64_t{1} << k;
        }
        if (f[x] != f[x ^ (std::uint64_t{1} << i)]) ++acc[0];
    });
    return {counts.get(0), trials};
}

inline Rational total_influence(const TruthTable& f, const Rational& delta) {
    Rational s = 0;
    for (std::size_t i = 0; i < arity(f); ++i) s += influence(f, i, delta);
    return s;
}

/// P_delta(f = +1) as counts a_k of +1 outputs by number of +1 inputs.
inline std::vector<std::uint64_t> positive_counts(const TruthTable& f) {
    const std::size_t n = arity(f);
    std::vector<std::uint64_t> a(n + 1, 0);
    for (std::uint64_t x = 0; x < f.size(); ++x)
        if (f[x] > 0) ++a[static_cast<std::size_t>(__builtin_popcountll(x))];
    return a;
}

inline Rational positive_probability(const TruthTable& f, const Rational& delta) {
    const auto a = positive_counts(f);
    const std::size_t n = a.size() - 1;
    Rational s = 0;
    for (std::size_t k = 0; k <= n; ++k)
        if (a[k]) s += Rational(static_cast<unsigned long>(a[k])) * config_probability((std::uint64_t{1} << k) - 1, n, delta);
    return s;
}

inline double positive_probability(const TruthTable& f, double delta) {
    const auto a = positive_counts(f);
    const std::size_t n = a.size() - 1;
    const double q = 0.5 + delta;
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        s += static_cast<double>(a[k]) * std::pow(q, static_cast<double>(k)) * std::pow(1 - q, static_cast<double>(n - k));
    return s;
}

/// Exact d/d delta of P_delta(f = +1): term-wise derivative of q^k (1-q)^(n-k).
inline Rational positive_probability_derivative(const TruthTable& f, const Rational& delta) {
    const auto a = positive_counts(f);
    const std::size_t n = a.size() - 1;
    const Rational q = Rational(1, 2) + delta, r = 1 - q;
    Rational s = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (!a[k]) continue;
        Rational term = 0;
        if (k > 0) term += Rational(static_cast<unsigned long>(k)) * pow(q, static_cast<unsigned>(k - 1)) * pow(r, static_cast<unsigned>(n - k));
        if (k < n) term -= Rational(static_cast<unsigned long>(n - k)) * pow(q, static_cast<unsigned>(k)) * pow(r, static_cast<unsigned>(n - k - 1));
        s += Rational(static_cast<unsigned long>(a[k])) * term;
    }
    return s;
}

/// |central difference of P_delta(f = +1) with step h - sum_i I_i^delta|.
inline double russo_residual(const TruthTable& f, const Rational& delta, double h) {
    const double d = to_double(delta);
    const double fd = (positive_probability(f, d + h) - positive_probability(f, d - h)) / (2 * h);
    return std::abs(fd - to_double(total_influence(f, delta)));
}

} // namespace opdyn::majority
