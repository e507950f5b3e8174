#pragma once

// Sequential learning: agent i acts once after seeing A_1..A_{i-1}. The external observer
// sees actions only; its likelihood ratio L^x = P(history | S=0) / P(history | S=1) drives
// every decision through L_i = L^x_i * P_i.

#include "opdyn/montecarlo.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/rng.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/stats.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace opdyn::cascade {

/// Action 1 iff L^x * P <= 1 (belief >= 1/2; indifference goes to 1).
inline int agent_decision(const Rational& observer_lr, const Rational& private_lr) {
    if (observer_lr <= 0 || private_lr <= 0) throw std::invalid_argument("agent_decision: likelihood ratios must be positive");
    return observer_lr * private_lr <= 1 ? 1 : 0;
}

inline int agent_decision(double observer_lr, double private_lr) {
    if (!(observer_lr > 0) || !(private_lr > 0)) throw std::invalid_argument("agent_decision: likelihood ratios must be positive");
    return observer_lr * private_lr <= 1.0 ? 1 : 0;
}

/// Decisions for every symbol of a finite model at observer ratio L^x.
inline std::vector<int> decisions(const Rational& observer_lr, const SignalModel& model) {
    const FiniteSignal f = model.finite_view();
    std::vector<int> out;
    for (Symbol x = 0; x < f.alphabet_size(); ++x) out.push_back(agent_decision(observer_lr, f.mu0[x] / f.mu1[x]));
    return out;
}

/// P(A = a | S = s, L^x) for a finite model: mass of the symbols whose decision is a.
inline std::pair<Rational, Rational> action_law(const Rational& observer_lr, int action, const SignalModel& model) {
    const FiniteSignal f = model.finite_view();
    const auto d = decisions(observer_lr, model);
    Rational p0 = 0, p1 = 0;
    for (Symbol x = 0; x < f.alphabet_size(); ++x)
        if (d[x] == action) {
            p0 += f.mu0[x];
            p1 += f.mu1[x];
        }
    return {p0, p1};
}

/// L^x' = L^x * P(A = a | S = 0) / P(A = a | S = 1).
inline Rational observer_update(const Rational& observer_lr, int action, const SignalModel& model) {
    if (action != 0 && action != 1) throw std::invalid_argument("observer_update: action must be 0 or 1");
    const auto [p0, p1] = action_law(observer_lr, action, model);
    if (p0 == 0 && p1 == 0) throw std::domain_error("observer_update: observed action has probability zero");
    if (p1 == 0) throw std::domain_error("observer_update: action rules out S = 1");
    return observer_lr * p0 / p1;
}

/// True iff the decision does not depend on the private signal.
inline bool detect_cascade(const Rational& observer_lr, const SignalModel& model) {
    if (model.is_gaussian()) return false;
    const auto d = decisions(observer_lr, model);
    for (int v : d)
        if (v != d.front()) return false;
    return true;
}

// ---------------------------------------------------------------------------------------
// Gaussian model: psi = +-1 + sigma Z. Private LLR log(mu1/mu0)(x) = 2x / sigma^2, so with
// log L^x = l the agent plays 1 iff x >= c = sigma^2 l / 2.

namespace detail {

/// log Q(z) with Q the standard normal upper tail.
inline double log_upper_tail(double z) {
    const double q = 0.5 * std::erfc(z / std::numbers::sqrt2);
    if (q > 0) return std::log(q);
    // Asymptotic expansion for far tails.
    return -0.5 * z * z - std::log(z) - 0.5 * std::log(2 * std::numbers::pi);
}

} // namespace detail

struct GaussianStep {
    double threshold = 0.0;  // c
    double log_p1_given_1 = 0.0, log_p1_given_0 = 0.0;  // log P(A = 1 | S)
    double log_p0_given_1 = 0.0, log_p0_given_0 = 0.0;  // log P(A = 0 | S)
};

inline GaussianStep gaussian_step(double log_observer_lr, double variance) {
    const double sd = std::sqrt(variance);
    GaussianStep g;
    g.threshold = variance * log_observer_lr / 2.0;
    g.log_p1_given_1 = detail::log_upper_tail((g.threshold - 1.0) / sd);
    g.log_p1_given_0 = detail::log_upper_tail((g.threshold + 1.0) / sd);
    g.log_p0_given_1 = detail::log_upper_tail(-(g.threshold - 1.0) / sd);
    g.log_p0_given_0 = detail::log_upper_tail(-(g.threshold + 1.0) / sd);
    return g;
}

inline double observer_update_gaussian(double log_observer_lr, int action, double variance) {
    const auto g = gaussian_step(log_observer_lr, variance);
    return action ? log_observer_lr + g.log_p1_given_0 - g.log_p1_given_1
                  : log_observer_lr + g.log_p0_given_0 - g.log_p0_given_1;
}

// ---------------------------------------------------------------------------------------
// Runs

struct CascadeRun {
    int state = 0;
    std::vector<int> actions;                  // A_1..A_n (index 0 is agent 1)
    std::vector<double> log_observer_lr;       // log L^x_i before agent i acts
    std::vector<int> observer_actions;         // A^x_i = 1 iff L^x_i <= 1
    std::optional<std::size_t> onset;          // first agent (0-based) in a cascade
    bool observer_copies() const {
        for (std::size_t i = 0; i + 1 < actions.size(); ++i)
            if (observer_actions[i + 1] != actions[i]) return false;
        return true;
    }
    bool constant_after_onset() const {
        if (!onset) return true;
        for (std::size_t i = *onset; i < actions.size(); ++i)
            if (actions[i] != actions[*onset]) return false;
        return true;
    }
};

/// Plays a finite-model sequence for a given profile. Memoizes per observer state.
class FiniteSequencer {
public:
    explicit FiniteSequencer(SignalModel model) : model_(std::move(model)) {
        if (model_.is_gaussian()) throw std::invalid_argument("FiniteSequencer: finite model required");
    }

    struct Node {
        std::vector<int> decision;  // per symbol
        bool cascade = false;
        Rational next[2];           // observer ratio after action 0 / 1 (unset if impossible)
        bool possible[2] = {false, false};
    };

    const Node& node(const Rational& lr) {
        auto it = cache_.find(lr);
        if (it != cache_.end()) return it->second;
        Node nd;
        nd.decision = decisions(lr, model_);
        nd.cascade = detect_cascade(lr, model_);
        for (int a = 0; a < 2; ++a) {
            const auto [p0, p1] = action_law(lr, a, model_);
            if (p0 + p1 == 0) continue;
            nd.possible[a] = true;
            nd.next[a] = lr * p0 / p1;
        }
        return cache_.emplace(lr, std::move(nd)).first->second;
    }

    CascadeRun play(int state, const std::vector<Symbol>& signals) {
        CascadeRun run;
        run.state = state;
        Rational lr = 1;
        for (std::size_t i = 0; i < signals.size(); ++i) {
            const Node& nd = node(lr);
            const int a = nd.decision.at(signals[i]);
            run.log_observer_lr.push_back(std::log(to_double(lr)));
            run.observer_actions.push_back(lr <= 1 ? 1 : 0);
            if (nd.cascade && !run.onset) run.onset = i;
            run.actions.push_back(a);
            lr = nd.next[a];
        }
        return run;
    }

    const SignalModel& model() const { return model_; }

private:
    SignalModel model_;
    std::map<Rational, Node> cache_;
};

inline CascadeRun play_gaussian(int state, const std::vector<double>& signals, double variance) {
    CascadeRun run;
    run.state = state;
    double l = 0.0;
    for (double x : signals) {
        run.log_observer_lr.push_back(l);
        run.observer_actions.push_back(l <= 0.0 ? 1 : 0);
        const int a = x >= variance * l / 2.0 ? 1 : 0;
        run.actions.push_back(a);
        l = observer_update_gaussian(l, a, variance);
    }
    return run;
}

/// Sampled run for trial `trial` of an experiment seeded with `seed`.
inline CascadeRun run_sequence(const SignalModel& model, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
    const auto world = sample_world(model, n, seed, trial);
    if (model.is_gaussian()) return play_gaussian(world.state, world.values, model.variance());
    FiniteSequencer seq(model);
    return seq.play(world.state, world.symbols);
}

struct SequenceEstimate {
    std::size_t n = 0;
    std::vector<Proportion> correct;  // P(A_i = S) per agent
    std::uint64_t copy_violations = 0;
    std::uint64_t cascades = 0;
};

inline SequenceEstimate run_sequence_mc(const SignalModel& model, std::size_t n, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("run_sequence_mc: trials must be positive");
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        const auto run = run_sequence(model, n, seed, t);
        for (std::size_t i = 0; i < n; ++i)
            if (run.actions[i] == run.state) ++acc[i];
        if (!run.observer_copies()) ++acc[n];
        if (run.onset) ++acc[n + 1];
    });
    SequenceEstimate est;
    est.n = n;
    for (std::size_t i = 0; i < n; ++i) est.correct.push_back({counts.get(i), trials});
    est.copy_violations = counts.get(n);
    est.cascades = counts.get(n + 1);
    return est;
}

/// Exact law of a finite-model sequence by enumerating all |Omega|^n profiles.
struct ExactSequence {
    std::size_t n = 0;
    std::vector<Rational> correct;        // P(A_i = S)
    std::vector<Rational> onset;          // P(onset = i)
    Rational no_cascade;                  // P(no cascade among the n agents)
    /// joint[i][j] = P(A_j = S and onset <= i)
    std::vector<std::vector<Rational>> joint;
    bool observer_copies = true;          // on every profile
    bool constant_after_onset = true;     // on every profile
};

inline ExactSequence run_sequence_exact(const SignalModel& model, std::size_t n) {
    if (model.is_gaussian()) throw std::invalid_argument("run_sequence_exact: finite model required");
    const FiniteSignal f = model.finite_view();
    const std::size_t k = f.alphabet_size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= k;
        if (total > 1'000'000) throw std::length_error("run_sequence_exact: |Omega|^n exceeds 10^6");
    }
    ExactSequence ex;
    ex.n = n;
    ex.correct.assign(n, Rational(0));
    ex.onset.assign(n, Rational(0));
    ex.no_cascade = 0;
    ex.joint.assign(n, std::vector<Rational>(n, Rational(0)));
    FiniteSequencer seq(model);
    std::vector<Symbol> digits(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Rational w0 = Rational(1, 2), w1 = Rational(1, 2);
        for (Symbol x : digits) {
            w0 *= f.mu0[x];
            w1 *= f.mu1[x];
        }
        const auto run = seq.play(0, digits);  // actions do not depend on S given the profile
        if (!run.observer_copies()) ex.observer_copies = false;
        if (!run.constant_after_onset()) ex.constant_after_onset = false;
        if (run.onset) ex.onset[*run.onset] += w0 + w1;
        else ex.no_cascade += w0 + w1;
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& w = run.actions[j] ? w1 : w0;
            ex.correct[j] += w;
            if (run.onset)
                for (std::size_t i = *run.onset; i < n; ++i) ex.joint[i][j] += w;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (++digits[i] < k) break;
            digits[i] = 0;
        }
    }
    return ex;
}

/// Observer tree over action histories: checks the martingale identity of B^x at every node.
struct ObserverTree {
    std::size_t nodes = 0;
    bool martingale = true;
    std::vector<Rational> correct;  // P(A_i = S), computed independently of the profile pass
};

inline ObserverTree observer_tree(const SignalModel& model, std::size_t n) {
    if (model.is_gaussian()) throw std::invalid_argument("observer_tree: finite model required");
    ObserverTree tree;
    tree.correct.assign(n, Rational(0));
    struct Frame {
        std::size_t depth;
        Rational lr, w0, w1;  // P(S = s, history)
    };
    std::vector<Frame> stack{{0, Rational(1), Rational(1, 2), Rational(1, 2)}};
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        ++tree.nodes;
        if (fr.depth == n) continue;
        const Rational belief = fr.w1 / (fr.w0 + fr.w1);
        Rational expected_next = 0;
        for (int a = 0; a < 2; ++a) {
            const auto [p0, p1] = action_law(fr.lr, a, model);
            const Rational b0 = fr.w0 * p0, b1 = fr.w1 * p1;
            if (b0 + b1 == 0) continue;
            tree.correct[fr.depth] += a ? b1 : b0;
            // P(branch | history) * B^x_next
            expected_next += (b0 + b1) / (fr.w0 + fr.w1) * (b1 / (b0 + b1));
            stack.push_back({fr.depth + 1, fr.lr * p0 / p1, b0, b1});
        }
        if (expected_next != belief) tree.martingale = false;
    }
    return tree;
}

} // namespace opdyn::cascade
