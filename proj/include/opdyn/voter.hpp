#pragma once

// Voter models on {0,1} opinions.
//  * base model: synchronous; agent i copies neighbor j's previous action with probability w(i,j)
//  * strong/weak variant: asynchronous, one uniformly random edge per step

#include "opdyn/linalg.hpp"
#include "opdyn/montecarlo.hpp"
#include "opdyn/network.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/rng.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/stats.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace opdyn::voter {

using State = std::vector<std::uint8_t>;

inline bool is_consensus(const State& s) {
    for (auto v : s)
        if (v != s.front()) return false;
    return true;
}

/// Index of the neighbor picked by u in [0,1) from agent i's weight row.
inline Agent pick_neighbor(const Network& net, Agent i, double u) {
    const auto row = net.out(i);
    double acc = 0.0;
    for (const auto& a : row) {
        acc += a.value;
        if (u < acc) return a.target;
    }
    return row.back().target;
}

/// One synchronous round: every agent independently copies a neighbor chosen by weight.
inline State step(const Network& net, const State& state, Stream& rng) {
    if (state.size() != net.size()) throw std::invalid_argument("voter::step: state has wrong dimension");
    State next(state.size());
    for (Agent i = 0; i < net.size(); ++i) next[i] = state[pick_neighbor(net, i, rng.uniform())];
    return next;
}

/// Default cap 100 * 2 d n^2 with d the maximum degree excluding self-loops.
inline std::uint64_t default_step_cap(const Network& net) {
    const std::uint64_t n = net.size(), d = std::max<std::size_t>(1, net.max_degree());
    return 100 * 2 * d * n * n;
}

struct ConsensusRun {
    std::optional<int> value;  // empty on timeout
    std::uint64_t time = 0;
};

inline ConsensusRun run_to_consensus(const Network& net, State state, Stream& rng, std::uint64_t step_cap) {
    ConsensusRun run;
    while (!is_consensus(state)) {
        if (run.time >= step_cap) return run;
        state = step(net, state, rng);
        ++run.time;
    }
    run.value = state.front();
    return run;
}

inline ConsensusRun run_to_consensus(const Network& net, const State& state, Stream& rng) {
    return run_to_consensus(net, state, rng, default_step_cap(net));
}

/// Exact next-state law from `state` as a map over encoded states (bit i = agent i).
inline std::vector<Rational> transition_row(const Network& net, const State& state) {
    const std::size_t n = net.size();
    if (n > 16) throw std::length_error("voter::transition_row: n must be <= 16");
    std::vector<Rational> ones(n, Rational(0));
    for (Agent i = 0; i < n; ++i)
        for (const auto& a : net.out(i))
            if (state[a.target]) ones[i] += a.weight;
    std::vector<Rational> row(std::size_t{1} << n);
    for (std::size_t y = 0; y < row.size(); ++y) {
        Rational p = 1;
        for (Agent i = 0; i < n && p != 0; ++i) p *= ((y >> i) & 1u) ? ones[i] : 1 - ones[i];
        row[y] = p;
    }
    return row;
}

inline constexpr std::size_t kExactAbsorptionLimit = 12;

/// h(x) = P(consensus on 1 | start x) for every x in {0,1}^n (bit i = agent i).
/// Solved modulo word primes and lifted; a candidate is accepted only if it satisfies
/// h(x) = sum_y P(x,y) h(y) exactly for every x with the right boundary values.
inline std::vector<Rational> absorption_probabilities(const Network& net) {
    const std::size_t n = net.size();
    if (n > kExactAbsorptionLimit) throw std::length_error("voter::absorption_probabilities: n must be <= 12");
    require_valid(net, true);
    if (!net.exact()) throw std::invalid_argument("voter::absorption_probabilities: network weights are not exact");
    const std::size_t states = std::size_t{1} << n, all = states - 1;

    // ones[x][i] = sum of w(i,j) over neighbors j with x_j = 1.
    std::vector<std::vector<Rational>> ones(states, std::vector<Rational>(n, Rational(0)));
    for (std::size_t x = 0; x < states; ++x)
        for (Agent i = 0; i < n; ++i)
            for (const auto& a : net.out(i))
                if ((x >> a.target) & 1u) ones[x][i] += a.weight;

    auto probability = [&](std::size_t x, std::size_t y) {
        Rational p = 1;
        for (Agent i = 0; i < n && p != 0; ++i) p *= ((y >> i) & 1u) ? ones[x][i] : 1 - ones[x][i];
        return p;
    };

    linalg::ModularBuilder build = [&](std::uint64_t prime) -> std::optional<linalg::ModularSystem> {
        std::vector<std::vector<std::uint64_t>> r(states, std::vector<std::uint64_t>(n));
        for (std::size_t x = 0; x < states; ++x)
            for (Agent i = 0; i < n; ++i) {
                auto v = linalg::rational_mod(ones[x][i], prime);
                if (!v) return std::nullopt;
                r[x][i] = *v;
            }
        linalg::ModularSystem sys{states, std::vector<std::uint64_t>(states * (states + 1), 0)};
        auto at = [&](std::size_t row, std::size_t col) -> std::uint64_t& { return sys.augmented[row * (states + 1) + col]; };
        for (std::size_t x = 0; x < states; ++x) {
            at(x, x) = 1;
            if (x == 0) continue;
            if (x == all) {
                at(x, states) = 1;
                continue;
            }
            for (std::size_t y = 0; y < states; ++y) {
                std::uint64_t p = 1;
                for (Agent i = 0; i < n && p; ++i) {
                    const std::uint64_t f = ((y >> i) & 1u) ? r[x][i] : (r[x][i] == 0 ? 1 : prime + 1 - r[x][i]) % prime;
                    p = linalg::detail::mulmod(p, f, prime);
                }
                std::uint64_t& cell = at(x, y);
                cell = cell >= p ? cell - p : cell + prime - p;
            }
        }
        return sys;
    };

    linalg::ExactVerifier verify = [&](const std::vector<Rational>& h) {
        if (h.size() != states || h[0] != 0 || h[all] != 1) return false;
        for (std::size_t x = 1; x < all; ++x) {
            Rational s = 0;
            for (std::size_t y = 0; y < states; ++y)
                if (h[y] != 0) s += probability(x, y) * h[y];
            if (s != h[x]) return false;
        }
        return true;
    };
    return linalg::solve_multimodular(build, verify);
}

inline std::size_t encode(const State& s) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i]) x |= std::size_t{1} << i;
    return x;
}

/// P(A_inf = 1 | signals) from the absorbing-chain solve.
inline Rational exact_consensus_probability(const Network& net, const State& signals) {
    if (signals.size() != net.size()) throw std::invalid_argument("exact_consensus_probability: dimension mismatch");
    return absorption_probabilities(net)[encode(signals)];
}

/// E[X_{t+1} | state] - X_t with X_t = sum_i |N(i)| A^i_t. Requires w(i,j) = 1/|N(i)| on an undirected net.
inline Rational martingale_residual(const Network& net, const State& state) {
    if (net.directed()) throw std::invalid_argument("martingale_residual: network must be undirected");
    if (state.size() != net.size()) throw std::invalid_argument("martingale_residual: dimension mismatch");
    Rational residual = 0;
    for (Agent i = 0; i < net.size(); ++i) {
        const Rational d(static_cast<unsigned long>(net.neighborhood_size(i)));
        Rational expected = 0;
        for (const auto& a : net.out(i)) {
            if (a.weight != 1 / d) throw std::invalid_argument("martingale_residual: weights must be uniform");
            if (state[a.target]) expected += a.weight;
        }
        residual += d * (expected - state[i]);
    }
    return residual;
}

/// Per-trial Monte Carlo of P(A_inf = S) under Bernoulli(delta) signals.
struct LearningRun {
    Proportion correct;
    std::uint64_t timeouts = 0;
    std::uint64_t total_time = 0;  // over completed runs
};

inline LearningRun learning_mc(const Network& net, const Rational& delta, std::uint64_t trials, std::uint64_t seed) {
    require_valid(net, true);
    const auto model = SignalModel::bernoulli(delta);
    const auto cap = default_step_cap(net);
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        const auto world = sample_world(model, net.size(), seed, t);
        State s(world.symbols.begin(), world.symbols.end());
        Stream rng(seed, t, net.size());
        const auto run = run_to_consensus(net, s, rng, cap);
        if (!run.value) {
            ++acc[1];
            return;
        }
        if (*run.value == world.state) ++acc[0];
        acc[2] += run.time;
    });
    const std::uint64_t completed = trials - counts.get(1);
    return {{counts.get(0), completed}, counts.get(1), counts.get(2)};
}

struct AbsorptionTime {
    double mean = 0.0;
    std::uint64_t completed = 0;
    std::uint64_t timeouts = 0;
    double bound = 0.0;  // 2 d n^2
};

/// Mean absorption time from Bernoulli(1/2 signals), i.e. uniform random starts.
inline AbsorptionTime absorption_time_mc(const Network& net, std::uint64_t trials, std::uint64_t seed) {
    require_valid(net, true);
    const auto cap = default_step_cap(net);
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        Stream rng(seed, t);
        State s(net.size());
        for (auto& v : s) v = rng.bernoulli(0.5);
        const auto run = run_to_consensus(net, s, rng, cap);
        if (!run.value) {
            ++acc[1];
            return;
        }
        ++acc[0];
        acc[2] += run.time;
    });
    AbsorptionTime out;
    out.completed = counts.get(0);
    out.timeouts = counts.get(1);
    out.mean = out.completed ? static_cast<double>(counts.get(2)) / static_cast<double>(out.completed) : 0.0;
    const double n = static_cast<double>(net.size()), d = static_cast<double>(net.max_degree());
    out.bound = 2.0 * d * n * n;
    return out;
}

// ---------------------------------------------------------------------------------------
// Strong/weak variant

struct StrongAgent {
    std::uint8_t opinion = 0;
    std::uint8_t strong = 1;
    bool operator==(const StrongAgent&) const = default;
};

using StrongState = std::vector<StrongAgent>;

inline StrongState strong_initial(const State& signals) {
    StrongState s;
    for (auto v : signals) s.push_back({v, 1});
    return s;
}

inline bool opinions_agree(const StrongState& s) {
    for (const auto& a : s)
        if (a.opinion != s.front().opinion) return false;
    return true;
}

inline std::size_t strong_count(const StrongState& s) {
    std::size_t c = 0;
    for (const auto& a : s) c += a.strong;
    return c;
}

/// Non-loop edges of an undirected network, each listed once.
inline std::vector<std::pair<Agent, Agent>> exchange_edges(const Network& net) {
    if (net.directed()) throw std::invalid_argument("strong voter: network must be undirected");
    std::vector<std::pair<Agent, Agent>> out;
    for (Agent i = 0; i < net.size(); ++i)
        for (const auto& a : net.out(i))
            if (i < a.target) out.emplace_back(i, a.target);
    if (out.empty()) throw std::invalid_argument("strong voter: network has no edges");
    return out;
}

/// One exchange on the edge (i, j).
inline void strong_exchange(StrongAgent& ai, StrongAgent& aj, Stream& rng) {
    if (ai.opinion != aj.opinion) {
        if (ai.strong && aj.strong) {
            ai.strong = aj.strong = 0;
        } else if (ai.strong) {
            aj.opinion = ai.opinion;
        } else if (aj.strong) {
            ai.opinion = aj.opinion;
        } else {
            ai.opinion = aj.opinion = rng.bernoulli(0.5) ? 1 : 0;
        }
    }
    if (rng.bernoulli(0.5)) std::swap(ai, aj);
}

inline void strong_voter_step(StrongState& state, const std::vector<std::pair<Agent, Agent>>& edges, Stream& rng) {
    const auto [i, j] = edges[rng.below(edges.size())];
    strong_exchange(state[i], state[j], rng);
}

struct StrongRun {
    std::optional<int> value;  // empty on timeout
    std::uint64_t steps = 0;
    bool strong_monotone = true;  // strong-agent count never increased
};

inline StrongRun run_strong_voter(const Network& net, const State& signals, Stream& rng, std::uint64_t step_cap) {
    if (signals.size() != net.size()) throw std::invalid_argument("run_strong_voter: dimension mismatch");
    const auto edges = exchange_edges(net);
    auto state = strong_initial(signals);
    StrongRun run;
    std::size_t strong = strong_count(state);
    while (!opinions_agree(state)) {
        if (run.steps >= step_cap) return run;
        strong_voter_step(state, edges, rng);
        ++run.steps;
        const std::size_t now = strong_count(state);
        if (now > strong) run.strong_monotone = false;
        strong = now;
    }
    run.value = state.front().opinion;
    return run;
}

} // namespace opdyn::voter
