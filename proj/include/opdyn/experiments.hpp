#pragma once

// Plain family runs, the named scenarios behind each acceptance check, and the registry.

#include "opdyn/bayes.hpp"
#include "opdyn/cascade.hpp"
#include "opdyn/degroot.hpp"
#include "opdyn/harness.hpp"
#include "opdyn/majority.hpp"
#include "opdyn/network.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/voter.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace opdyn::harness {

// ---------------------------------------------------------------------------------------
// Option helpers

template <typename T>
T option(const ExperimentConfig& c, const char* key, T fallback) {
    if (!c.options.contains(key)) return fallback;
    try {
        return c.options.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config field 'options.") + key + "': " + e.what());
    }
}

inline Rational rational_option(const ExperimentConfig& c, const char* key, const std::string& fallback) {
    const json& v = c.options.contains(key) ? c.options.at(key) : json(fallback);
    try {
        return v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump());
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config field 'options.") + key + "': " + e.what());
    }
}

inline std::vector<Rational> rational_list(const ExperimentConfig& c, const char* key, const std::vector<std::string>& fallback) {
    std::vector<Rational> out;
    for (const auto& s : option<std::vector<std::string>>(c, key, fallback)) out.push_back(parse_rational(s));
    return out;
}

inline std::vector<std::string> graph_list(const ExperimentConfig& c, const std::vector<std::string>& fallback = {}) {
    auto g = option<std::vector<std::string>>(c, "graphs", fallback);
    if (g.empty() && !c.graph.empty()) g.push_back(c.graph);
    if (g.empty()) throw std::invalid_argument("config field 'graph': a network is required");
    return g;
}

inline Network network_of(const ExperimentConfig& c) {
    if (c.graph.empty()) throw std::invalid_argument("config field 'graph': a network is required");
    try {
        return load_network(c.graph);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config field 'graph': ") + e.what());
    }
}

inline SignalModel signal_of(const ExperimentConfig& c) {
    if (c.signal.empty()) throw std::invalid_argument("config field 'signal': a signal model is required");
    try {
        return parse_signal_spec(c.signal);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config field 'signal': ") + e.what());
    }
}

inline Rational bernoulli_delta(const ExperimentConfig& c) {
    const auto model = signal_of(c);
    const auto* b = std::get_if<BernoulliSignal>(&model.variant());
    if (!b) throw std::invalid_argument("config field 'signal': this run needs a bernoulli signal");
    return b->delta;
}

inline std::string bits(std::uint64_t x, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i)
        if ((x >> i) & 1u) s[i] = '1';
    return s;
}

inline std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? sep : "") + xs[k];
    return out;
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

inline json rational_series(const std::vector<Rational>& xs) {
    json j = json::array();
    for (const auto& x : xs) j.push_back(to_string(x));
    return j;
}

/// Trajectory rows for the optional CSV output.
struct TrajectoryTable {
    std::vector<std::vector<double>> rounds;  // rounds[t][agent]
};

inline void write_csv(std::ostream& out, const TrajectoryTable& table) {
    out << "round,agent,value\n";
    out.precision(17);
    for (std::size_t t = 0; t < table.rounds.size(); ++t)
        for (std::size_t i = 0; i < table.rounds[t].size(); ++i) out << t << ',' << i << ',' << table.rounds[t][i] << '\n';
}

struct Outcome {
    ResultRecord record;
    TrajectoryTable trajectory;
};

// ---------------------------------------------------------------------------------------
// Plain runs

namespace plain {

inline void degroot(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    const auto stationary = stationary_distribution(net);
    r.series["alpha"] = stationary.alpha;
    if (stationary.exact) r.series["alpha_exact"] = rational_series(*stationary.exact);

    if (c.options.contains("cheaters")) {
        std::map<Agent, Rational> exact;
        std::map<Agent, double> approx;
        for (const auto& [k, v] : c.options.at("cheaters").items()) {
            const Agent a = std::stoul(k);
            exact[a] = v.is_string() ? parse_rational(v.get<std::string>()) : parse_rational(v.dump());
            approx[a] = to_double(exact[a]);
        }
        const auto limits = degroot::cheater_limits_exact(net, exact);
        r.series["cheater_limits"] = rational_series(limits);
        for (Agent i = 0; i < net.size(); ++i) r.set_exact("cheater_limit[" + std::to_string(i) + "]", limits[i]);
        std::vector<double> signals(net.size(), 0.5);
        if (!c.signal.empty()) {
            const auto world = sample_world(signal_of(c), net.size(), c.seed, 0);
            for (Agent i = 0; i < net.size(); ++i) signals[i] = static_cast<double>(world.symbols[i]);
        }
        const auto run = degroot::run_with_cheaters(net, signals, approx, c.horizon ? c.horizon : 1'000'000, 1e-13);
        double gap = 0.0;
        for (Agent i = 0; i < net.size(); ++i) gap = std::max(gap, std::abs(run.actions[i] - to_double(limits[i])));
        r.estimates["cheater_simulation_gap"] = gap;
        r.check("cheater_simulation_matches_solve", run.converged && gap <= 1e-9, "max gap " + fmt(gap));
    }

    if (c.signal.empty()) return;
    const Rational delta = bernoulli_delta(c);
    if (c.mode == "exact") {
        const auto e = degroot::learning_probability_exact(net, delta);
        r.set_exact("p_success", e.success);
        r.set_exact("p_tie", e.tie);
    } else {
        const auto e = degroot::learning_probability_mc(net, delta, c.trials, c.seed);
        r.set_proportion("p_success", e.mc_success);
        r.set_proportion("p_tie", e.mc_tie);
    }
    r.estimates["hoeffding_lower_bound"] = degroot::hoeffding_success_bound(stationary.alpha, to_double(delta));

    if (c.horizon > 0) {
        const auto world = sample_world(signal_of(c), net.size(), c.seed, 0);
        std::vector<double> signals(world.symbols.begin(), world.symbols.end());
        out.trajectory.rounds = degroot::trajectory(net, signals, c.horizon);
        r.estimates["sampled_limit"] = degroot::limit(net, signals, stationary);
    }
}

inline void voter(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    const std::size_t n = net.size();
    if (c.mode == "exact") {
        const auto h = voter::absorption_probabilities(net);
        const auto alpha = stationary_exact(net);
        bool identity = true;
        json hs = json::object();
        for (std::uint64_t x = 0; x < h.size(); ++x) {
            Rational weighted = 0;
            for (Agent i = 0; i < n; ++i)
                if ((x >> i) & 1u) weighted += alpha[i];
            identity = identity && weighted == h[x];
            hs[bits(x, n)] = to_string(h[x]);
        }
        r.series["absorption"] = hs;
        r.series["alpha_exact"] = rational_series(alpha);
        r.check("absorption_equals_alpha_weighted_signals", identity);
        if (!c.signal.empty()) {
            const Rational q = Rational(1, 2) + bernoulli_delta(c);
            Rational correct = 0;
            for (std::uint64_t x = 0; x < h.size(); ++x) {
                const auto k = static_cast<unsigned>(__builtin_popcountll(x));
                const Rational given1 = pow(q, k) * pow(1 - q, static_cast<unsigned>(n) - k);
                const Rational given0 = pow(1 - q, k) * pow(q, static_cast<unsigned>(n) - k);
                correct += Rational(1, 2) * (given1 * h[x] + given0 * (1 - h[x]));
            }
            r.set_exact("p_correct", correct);
        }
    } else {
        const Rational delta = bernoulli_delta(c);
        const auto run = voter::learning_mc(net, delta, c.trials, c.seed);
        r.set_proportion("p_correct", run.correct);
        r.estimates["timeouts"] = static_cast<double>(run.timeouts);
        const auto t = voter::absorption_time_mc(net, c.trials, c.seed + 1);
        r.estimates["mean_absorption_time"] = t.mean;
        r.estimates["absorption_time_bound"] = t.bound;
    }
    if (c.horizon > 0) {
        const auto world = sample_world(c.signal.empty() ? SignalModel::bernoulli(Rational(1, 4)) : signal_of(c), n, c.seed, 0);
        voter::State s(world.symbols.begin(), world.symbols.end());
        Stream rng(c.seed, 0, n);
        for (std::size_t t = 0; t <= c.horizon; ++t) {
            out.trajectory.rounds.emplace_back(s.begin(), s.end());
            if (voter::is_consensus(s)) break;
            s = voter::step(net, s, rng);
        }
    }
}

inline void voter_strong(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    const auto model = signal_of(c);
    const std::size_t n = net.size();
    const std::uint64_t trials = c.trials ? c.trials : 1000;
    const std::uint64_t cap = c.horizon ? c.horizon : 1000 * n * n * std::max<std::size_t>(1, net.undirected_edge_count());
    auto counts = run_trials<Counters>(trials, [&](std::uint64_t t, Counters& acc) {
        const auto world = sample_world(model, n, c.seed, t);
        voter::State s(world.symbols.begin(), world.symbols.end());
        Stream rng(c.seed, t, n);
        const auto run = voter::run_strong_voter(net, s, rng, cap);
        if (!run.value) {
            ++acc[0];
            return;
        }
        const std::size_t ones = static_cast<std::size_t>(std::count(s.begin(), s.end(), 1));
        if (*run.value == world.state) ++acc[1];
        if (2 * ones != n) {
            ++acc[2];
            if (*run.value == (2 * ones > n ? 1 : 0)) ++acc[3];
        }
        if (!run.strong_monotone) ++acc[4];
    });
    const std::uint64_t completed = trials - counts.get(0);
    r.estimates["timeouts"] = static_cast<double>(counts.get(0));
    if (completed) r.set_proportion("p_correct", {counts.get(1), completed});
    if (counts.get(2)) r.set_proportion("p_signal_majority", {counts.get(3), counts.get(2)});
    r.check("strong_count_nonincreasing", counts.get(4) == 0);
}

inline void majority(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    majority::require_majority_network(net);
    const std::size_t n = net.size();
    if (!c.signal.empty()) {
        const Rational delta = bernoulli_delta(c);
        if (c.mode == "exact") {
            const auto law = majority::limit_law(net);
            const auto ret = majority::retention_exact(law, delta);
            r.set_exact("retention_error", ret.error);
            r.estimates["limit_profiles"] = static_cast<double>(law.by_profile.size());
            const auto props = majority::map_properties(ret.map_rule, n);
            r.check("map_rule_odd", props.odd);
            r.check("map_rule_monotone", props.monotone);
        } else {
            r.set_proportion("retention_error", majority::retention_mc(net, delta, c.trials, c.seed));
        }
    }
    majority::Config start(n, 1);
    if (!c.signal.empty()) {
        const auto world = sample_world(signal_of(c), n, c.seed, 0);
        start = majority::from_bits({world.symbols.begin(), world.symbols.end()});
    }
    if (option<bool>(c, "emit_lyapunov", false)) {
        const auto audit = majority::audit_trajectory(net, start);
        r.series["lyapunov"] = audit.l_values;
        r.series["j"] = audit.j_values;
        r.estimates["entry_time"] = static_cast<double>(audit.entry_time);
        r.estimates["period"] = static_cast<double>(audit.period);
    }
    if (c.horizon > 0) {
        auto s = start;
        for (std::size_t t = 0; t <= c.horizon; ++t) {
            out.trajectory.rounds.emplace_back(s.begin(), s.end());
            s = majority::step(net, s);
        }
    }
}

inline bayes::Utility utility_of(const ExperimentConfig& c) {
    const auto u = option<std::string>(c, "utility", "continuous");
    if (u == "continuous") return bayes::Utility::continuous;
    if (u == "discrete") return bayes::Utility::discrete;
    throw std::invalid_argument("config field 'options.utility': must be 'continuous' or 'discrete'");
}

inline bayes::TieRule tie_of(const ExperimentConfig& c) {
    const auto t = option<std::string>(c, "tie", "one");
    if (t == "one") return bayes::TieRule::choose_one;
    if (t == "own") return bayes::TieRule::own_signal;
    throw std::invalid_argument("config field 'options.tie': must be 'one' or 'own'");
}

inline bayes::ProfileSpace space_of(const ExperimentConfig& c, std::size_t n) {
    if (c.signal == "xor") {
        if (n != 2) throw std::invalid_argument("config field 'graph': the xor table needs exactly 2 agents");
        return bayes::build_profile_space(xor_table());
    }
    return bayes::build_profile_space(signal_of(c), n);
}

inline void bayes_run(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    const auto space = space_of(c, net.size());
    const std::size_t horizon = c.horizon ? c.horizon : space.size() * net.size() + 1;
    const auto traj = bayes::run_exact(net, space, horizon, utility_of(c), tie_of(c));
    r.estimates["profiles"] = static_cast<double>(space.size());
    r.estimates["rounds"] = static_cast<double>(traj.last());
    r.check("stable_within_horizon", traj.stable);
    if (traj.stable) {
        const auto fx = bayes::fixation_stats(traj, space);
        r.estimates["max_fixation"] = static_cast<double>(fx.max_fixation);
        r.estimates["max_action_changes"] = static_cast<double>(fx.max_changes);
        r.check("fixation_within_bounds", fx.within_bounds());
    }
    const auto agree = bayes::agreement_check(traj, space);
    for (Agent i = 0; i < net.size(); ++i) r.set_exact("limit_utility[" + std::to_string(i) + "]", agree.limit_utilities[i]);
    r.check("agreement", agree.ok(traj.utility));
    r.check("filtration", bayes::filtration_check(traj, space).ok());
    if (traj.utility == bayes::Utility::continuous)
        r.estimates["full_information_mismatches"] = static_cast<double>(bayes::full_information_check(traj, space).mismatches);
    for (std::size_t t = 0; t <= traj.last(); ++t) {
        std::vector<double> row;
        for (Agent i = 0; i < net.size(); ++i) row.push_back(to_double(bayes::expected_utility(traj, i, t)));
        out.trajectory.rounds.push_back(std::move(row));
    }
}

inline void cascade(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto model = signal_of(c);
    const auto n = option<std::size_t>(c, "n", 16);
    if (c.mode == "exact") {
        const auto ex = cascade::run_sequence_exact(model, n);
        r.series["p_correct"] = rational_series(ex.correct);
        for (std::size_t i = 0; i < n; ++i) r.set_exact("p_correct[" + std::to_string(i + 1) + "]", ex.correct[i]);
        r.set_exact("p_no_cascade", ex.no_cascade);
        r.check("observer_copies_previous_action", ex.observer_copies);
        r.check("constant_after_onset", ex.constant_after_onset);
    } else {
        const auto est = cascade::run_sequence_mc(model, n, c.trials, c.seed);
        for (std::size_t i = 0; i < n; ++i) r.set_proportion("p_correct[" + std::to_string(i + 1) + "]", est.correct[i]);
        r.set_proportion("p_cascade", {est.cascades, c.trials});
        r.check("observer_copies_previous_action", est.copy_violations == 0);
    }
}

inline void three_bit(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const Rational p = rational_option(c, "p", "2/3");
    const auto d = rational_list(c, "deltas", {"0", "0", "0"});
    if (d.size() != 3) throw std::invalid_argument("config field 'options.deltas': exactly three values are required");
    const auto m = map_accuracy_three_bits(p, {d[0], d[1], d[2]});
    r.set_exact("accuracy", m.accuracy);
    r.set_exact("lower_bound", p + three_bit_margin(p));
    r.series["map_rule"] = m.rule;
    r.check("accuracy_at_least_bound", m.accuracy >= p + three_bit_margin(p));
}

} // namespace plain

// ---------------------------------------------------------------------------------------
// Scenarios

namespace scenario {

inline void degroot_limit(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto nets = option<std::size_t>(c, "nets", 20);
    const auto n_min = option<std::size_t>(c, "n_min", 5), n_max = option<std::size_t>(c, "n_max", 50);
    const auto extra = option<std::size_t>(c, "extra_arcs", 3);
    const double tv_threshold = option<double>(c, "tv", 1e-9), tolerance = option<double>(c, "tolerance", 1e-8);
    const auto model = signal_of(c);
    const double delta = to_double(bernoulli_delta(c));
    double worst = 0.0;
    bool all_mixed = true, hull = true, rate = true, strongly_connected_all = true;
    std::uint64_t steps = 0, strict_rate_holds = 0;
    json per = json::array();
    for (std::size_t k = 0; k < nets; ++k) {
        const std::size_t n = nets > 1 ? n_min + (n_max - n_min) * k / (nets - 1) : n_min;
        const auto net = generate({GraphKind::random_directed, n, extra, 0, c.seed + k});
        strongly_connected_all = strongly_connected_all && validate(net, true).ok();
        const auto world = sample_world(model, n, c.seed, k);
        std::vector<double> actions(world.symbols.begin(), world.symbols.end());
        const auto stationary = stationary_distribution(net);
        Rational exact_target = 0;
        for (Agent i = 0; i < n; ++i)
            if (world.symbols[i]) exact_target += (*stationary.exact)[i];
        const double target = to_double(exact_target);
        MixingTracker tracker(net, stationary.alpha);
        double tv = tracker.max_tv();
        std::size_t rounds = 0;
        while (tv > tv_threshold && rounds < 1'000'000) {
            auto next = degroot::step(net, actions);
            const auto [lo, hi] = std::minmax_element(actions.begin(), actions.end());
            const auto [nlo, nhi] = std::minmax_element(next.begin(), next.end());
            if (*nhi > *hi + 1e-15 || *nlo < *lo - 1e-15) hull = false;
            actions = std::move(next);
            tracker.step();
            tv = tracker.max_tv();
            ++rounds;
            double dev = 0.0;
            for (double a : actions) dev = std::max(dev, std::abs(a - target));
            ++steps;
            if (dev > 2.0 * tv + 1e-12) rate = false;
            if (dev <= 2.0 * tv * delta + 1e-12) ++strict_rate_holds;
        }
        all_mixed = all_mixed && tv <= tv_threshold;
        double dev = 0.0;
        for (double a : actions) dev = std::max(dev, std::abs(a - target));
        worst = std::max(worst, dev);
        per.push_back(json{{"n", n}, {"rounds", rounds}, {"deviation", dev}, {"limit", to_string(exact_target)}});
    }
    r.series["networks"] = per;
    r.estimates["max_deviation"] = worst;
    r.estimates["strict_rate_fraction"] = steps ? static_cast<double>(strict_rate_holds) / static_cast<double>(steps) : 1.0;
    r.check("networks_strongly_connected_stochastic", strongly_connected_all);
    r.check("mixed_below_threshold", all_mixed);
    r.check("limit_deviation", worst <= tolerance, "max deviation " + fmt(worst) + " vs " + fmt(tolerance));
    r.check("convex_hull_shrinks", hull);
    r.check("rate_bound_two_tv", rate);
}

inline void degroot_monotone(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto graphs = graph_list(c);
    const auto grid = rational_list(c, "deltas", {});
    const Rational small = rational_option(c, "small_delta", "1/100");
    const double small_tolerance = option<double>(c, "small_tolerance", 0.02);
    bool monotone = true, small_ok = true, hoeffding = true, tie_free = true, zero_is_half = true;
    std::vector<std::string> monotone_failures, small_failures;
    json per = json::object();
    for (const auto& g : graphs) {
        const auto net = load_network(g);
        const auto poly = degroot::learning_polynomial(net);
        const auto alpha = stationary_distribution(net).alpha;
        std::vector<Rational> values;
        for (const auto& d : grid) {
            values.push_back(poly.success(d));
            if (poly.tie(d) != 0) tie_free = false;
            if (to_double(values.back()) < degroot::hoeffding_success_bound(alpha, to_double(d)) - 1e-12) hoeffding = false;
        }
        for (std::size_t k = 1; k < values.size(); ++k)
            if (values[k] < values[k - 1]) {
                monotone = false;
                monotone_failures.push_back(g);
            }
        const Rational at_small = poly.success(small);
        const double gap = std::abs(to_double(at_small) - 0.5);
        if (gap > small_tolerance) {
            small_ok = false;
            small_failures.push_back(g + ": gap " + fmt(gap));
        }
        if (poly.success(Rational(0)) != Rational(1, 2)) zero_is_half = false;
        per[g] = json{{"p_w", rational_series(values)}, {"p_w_small", to_string(at_small)}};
        r.estimates["p_w_small[" + g + "]"] = to_double(at_small);
    }
    r.series["networks"] = per;
    r.check("p_w_nondecreasing", monotone, join(monotone_failures));
    r.check("p_w_near_half_at_small_delta", small_ok, join(small_failures));
    r.check("p_w_zero_is_half", zero_is_half);
    r.check("no_tie_mass", tie_free);
    r.check("hoeffding_lower_bound", hoeffding);
}

inline void voter_eq1(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    bool ok = true;
    std::vector<std::string> failures;
    for (const auto& g : graph_list(c)) {
        const auto net = load_network(g);
        const auto h = voter::absorption_probabilities(net);
        const auto alpha = stationary_exact(net);
        for (std::uint64_t x = 0; x < h.size(); ++x) {
            Rational weighted = 0;
            for (Agent i = 0; i < net.size(); ++i)
                if ((x >> i) & 1u) weighted += alpha[i];
            if (weighted != h[x]) {
                ok = false;
                failures.push_back(g + " " + bits(x, net.size()));
                break;
            }
        }
        r.series["alpha[" + g + "]"] = rational_series(alpha);
    }
    r.check("absorption_equals_alpha_weighted_signals", ok, join(failures));
}

inline void voter_learning(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    for (const auto& d : rational_list(c, "deltas", {"1/10", "3/10"})) {
        const auto run = voter::learning_mc(net, d, c.trials, c.seed);
        const std::string key = "p_correct[" + to_string(d) + "]";
        r.set_proportion(key, run.correct);
        const double target = 0.5 + to_double(d);
        r.check(key + "_within_3_half_widths", run.correct.within_half_widths(target, 3),
                fmt(run.correct.estimate()) + " vs " + fmt(target));
        r.check(key + "_no_timeouts", run.timeouts == 0);
    }
}

inline void voter_absorption(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    for (const auto& g : graph_list(c)) {
        const auto net = load_network(g);
        const auto t = voter::absorption_time_mc(net, c.trials, c.seed);
        r.estimates["mean_time[" + g + "]"] = t.mean;
        r.estimates["bound[" + g + "]"] = t.bound;
        r.check("mean_time_within_bound[" + g + "]", t.timeouts == 0 && t.mean <= t.bound,
                fmt(t.mean) + " vs " + fmt(t.bound) + ", timeouts " + std::to_string(t.timeouts));
    }
}

inline void strong_voter_majority(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto cap_factor = option<std::uint64_t>(c, "cap_factor", 1000);
    for (const auto& g : graph_list(c)) {
        const auto net = load_network(g);
        const std::size_t n = net.size();
        const std::uint64_t cap = cap_factor * n * n * net.undirected_edge_count();
        auto counts = run_trials<Counters>(c.trials, [&](std::uint64_t t, Counters& acc) {
            Stream rng(c.seed, t, n + 1);
            voter::State s(n);
            std::size_t ones = 0;
            do {
                ones = 0;
                for (auto& v : s) ones += (v = rng.bernoulli(0.5));
            } while (2 * ones == n);
            const auto run = voter::run_strong_voter(net, s, rng, cap);
            if (!run.value) {
                ++acc[0];
                return;
            }
            if (*run.value == (2 * ones > n ? 1 : 0)) ++acc[1];
            if (!run.strong_monotone) ++acc[2];
        });
        const std::uint64_t completed = c.trials - counts.get(0);
        r.estimates["completed[" + g + "]"] = static_cast<double>(completed);
        r.estimates["timeouts[" + g + "]"] = static_cast<double>(counts.get(0));
        r.check("consensus_is_majority[" + g + "]", completed > 0 && counts.get(1) == completed,
                std::to_string(counts.get(1)) + " of " + std::to_string(completed) + " completed");
        r.check("strong_count_nonincreasing[" + g + "]", counts.get(2) == 0);
    }
    // Tie case: exactly half the agents start at 1.
    const auto tie_net = load_network(option<std::string>(c, "tie_graph", "cycle:6"));
    const std::size_t n = tie_net.size();
    const std::uint64_t cap = cap_factor * n * n * tie_net.undirected_edge_count();
    auto counts = run_trials<Counters>(c.trials, [&](std::uint64_t t, Counters& acc) {
        Stream rng(c.seed + 1, t, n + 1);
        std::vector<Agent> order(n);
        for (Agent i = 0; i < n; ++i) order[i] = i;
        for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
        voter::State s(n, 0);
        for (std::size_t k = 0; k < n / 2; ++k) s[order[k]] = 1;
        const auto run = voter::run_strong_voter(tie_net, s, rng, cap);
        if (!run.value) {
            ++acc[0];
            return;
        }
        if (*run.value == 1) ++acc[1];
    });
    const Proportion tie{counts.get(1), c.trials - counts.get(0)};
    r.set_proportion("tie_p_one", tie);
    r.estimates["tie_timeouts"] = static_cast<double>(counts.get(0));
    r.check("tie_case_fair", tie.trials > 0 && tie.within_half_widths(0.5, 3), fmt(tie.estimate()));
}

/// Exhaustive majority audit. `|E|` is read as the number of ordered arcs (self-loops included).
inline void majority_period2(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    bool entry_ok = true, entry_edges_ok = true, identity = true, doubled = true, j_nonneg = true, l_down = true, period_ok = true,
         odd_ok = true;
    std::uint64_t configs = 0, identity_failures = 0;
    std::vector<std::string> literal_failures;
    json per = json::object();
    for (const auto& g : graph_list(c)) {
        const auto net = load_network(g);
        if (!validate_odd_neighborhoods(net).ok()) {
            odd_ok = false;
            continue;
        }
        const std::size_t n = net.size();
        std::size_t max_entry = 0;
        std::uint64_t local_failures = 0;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            const auto audit = majority::audit_trajectory(net, majority::decode(x, n));
            ++configs;
            max_entry = std::max(max_entry, audit.entry_time);
            if (audit.period > 2) period_ok = false;
            if (audit.entry_time > net.arc_count()) entry_ok = false;
            if (audit.entry_time > net.undirected_edge_count()) entry_edges_ok = false;
            if (!audit.identity_holds) {
                identity = false;
                ++local_failures;
            }
            doubled = doubled && audit.doubled_identity_holds;
            j_nonneg = j_nonneg && audit.j_nonnegative;
            l_down = l_down && audit.l_nonincreasing;
        }
        identity_failures += local_failures;
        if (local_failures) literal_failures.push_back(g);
        per[g] = json{{"n", n}, {"arcs", net.arc_count()}, {"edges", net.undirected_edge_count()}, {"max_entry_time", max_entry},
                      {"literal_identity_failures", local_failures}};
    }
    r.series["networks"] = per;
    r.estimates["configurations"] = static_cast<double>(configs);
    r.estimates["literal_identity_failures"] = static_cast<double>(identity_failures);
    r.check("odd_closed_neighborhoods", odd_ok);
    r.check("period_at_most_two", period_ok);
    r.check("entry_time_within_arc_count", entry_ok);
    r.check("j_nonnegative", j_nonneg);
    r.check("lyapunov_nonincreasing", l_down);
    r.check("lyapunov_identity_doubled", doubled, "L_t - L_{t-1} = -2 J_t");
    r.check("lyapunov_identity_literal", identity,
            identity ? "L_t - L_{t-1} = -J_t"
                     : "L_t - L_{t-1} = -2 J_t holds instead: L sums over ordered arcs, so each unordered pair is "
                       "counted twice; failing on " + join(literal_failures));
    r.estimates["entry_time_within_edge_count"] = entry_edges_ok ? 1.0 : 0.0;
}

inline void majority_russo(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto maj3 = majority::truth_table(
        [](const majority::Config& x) -> majority::Spin { return x[0] + x[1] + x[2] > 0 ? 1 : -1; }, 3);
    bool closed_form = true;
    for (const auto& d : rational_list(c, "deltas", {})) {
        const Rational q = Rational(1, 2) + d;
        const Rational inf = majority::total_influence(maj3, d);
        if (inf != 6 * q * (1 - q) || inf != majority::positive_probability_derivative(maj3, d)) closed_form = false;
    }
    r.check("three_bit_majority_closed_form", closed_form, "sum of influences = 6q(1-q) = derivative");

    const auto net = network_of(c);
    const auto f = majority::limit_majority_function(net);
    r.check("dynamics_function_monotone", majority::is_monotone(f));
    const double h = option<double>(c, "h", 1e-4), tolerance = option<double>(c, "tolerance", 1e-6);
    double worst = 0.0;
    bool exact_identity = true;
    for (const auto& d : rational_list(c, "dynamics_deltas", {})) {
        const double res = majority::russo_residual(f, d, h);
        worst = std::max(worst, res);
        if (majority::total_influence(f, d) != majority::positive_probability_derivative(f, d)) exact_identity = false;
        r.set_exact("total_influence[" + to_string(d) + "]", majority::total_influence(f, d));
    }
    r.estimates["max_central_difference_residual"] = worst;
    r.check("central_difference_residual", worst <= tolerance, fmt(worst));
    r.check("exact_derivative_identity", exact_identity);
}

inline void three_bit_map(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto ps = rational_list(c, "p", {});
    const auto fractions = rational_list(c, "delta_fractions", {});
    std::uint64_t cases = 0, failures = 0;
    Rational min_slack = 1;
    for (const auto& p : ps) {
        const Rational scale = 1 - p;
        for (const auto& a : fractions)
            for (const auto& b : fractions)
                for (const auto& d : fractions) {
                    const auto m = map_accuracy_three_bits(p, {a * scale, b * scale, d * scale});
                    const Rational slack = m.accuracy - p - three_bit_margin(p);
                    ++cases;
                    if (slack < 0) ++failures;
                    if (slack < min_slack) min_slack = slack;
                }
    }
    r.estimates["cases"] = static_cast<double>(cases);
    r.set_exact("min_slack", min_slack);
    r.check("accuracy_at_least_bound", cases > 0 && failures == 0, std::to_string(failures) + " of " + std::to_string(cases));
}

/// Every labeled connected simple graph on n vertices, as edge lists.
inline std::vector<std::vector<std::pair<Agent, Agent>>> connected_graphs(std::size_t n) {
    std::vector<std::pair<Agent, Agent>> pairs;
    for (Agent i = 0; i < n; ++i)
        for (Agent j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<std::vector<std::pair<Agent, Agent>>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
        std::vector<std::pair<Agent, Agent>> edges;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((mask >> k) & 1u) edges.push_back(pairs[k]);
        std::vector<std::size_t> parent(n);
        for (Agent i = 0; i < n; ++i) parent[i] = i;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        std::size_t components = n;
        for (auto [a, b] : edges)
            if (find(a) != find(b)) {
                parent[find(a)] = find(b);
                --components;
            }
        if (components == 1) out.push_back(std::move(edges));
    }
    return out;
}

struct BayesCase {
    std::string name;
    Network net;
};

inline std::vector<BayesCase> bayes_networks(const ExperimentConfig& c) {
    std::vector<BayesCase> cases;
    const auto max_n = option<std::size_t>(c, "all_connected_up_to", 0);
    for (std::size_t n = 1; n <= max_n; ++n)
        for (const auto& edges : connected_graphs(n)) {
            std::string name = "n" + std::to_string(n) + "{";
            for (auto [a, b] : edges) name += std::to_string(a) + std::to_string(b) + ";";
            name += "}";
            cases.push_back({name, from_edge_list(n, edges)});
        }
    for (const auto& g : option<std::vector<std::string>>(c, "graphs", {})) cases.push_back({g, load_network(g)});
    return cases;
}

inline std::vector<std::pair<std::string, SignalModel>> bayes_signals(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, SignalModel>> out;
    for (const auto& s : option<std::vector<std::string>>(c, "signals", {c.signal})) out.emplace_back(s, parse_signal_spec(s));
    return out;
}

inline std::vector<std::pair<bayes::Utility, bayes::TieRule>> bayes_rules(const ExperimentConfig& c) {
    std::vector<std::pair<bayes::Utility, bayes::TieRule>> out;
    for (const auto& s : option<std::vector<std::string>>(c, "rules", {"continuous"})) {
        if (s == "continuous") out.emplace_back(bayes::Utility::continuous, bayes::TieRule::choose_one);
        else if (s == "discrete:one") out.emplace_back(bayes::Utility::discrete, bayes::TieRule::choose_one);
        else if (s == "discrete:own") out.emplace_back(bayes::Utility::discrete, bayes::TieRule::own_signal);
        else throw std::invalid_argument("config field 'options.rules': unknown rule '" + s + "'");
    }
    return out;
}

/// Runs the exact engine over every (network, signal, rule) combination.
template <typename Visit>
void for_each_bayes_run(const ExperimentConfig& c, Visit&& visit) {
    const auto nets = bayes_networks(c);
    const auto signals = bayes_signals(c);
    const auto rules = bayes_rules(c);
    for (const auto& [sname, model] : signals)
        for (const auto& nc : nets) {
            const auto space = bayes::build_profile_space(model, nc.net.size());
            const std::size_t horizon = space.size() * nc.net.size() + 1;
            for (const auto& [u, tie] : rules) {
                const auto traj = bayes::run_exact(nc.net, space, horizon, u, tie);
                visit(nc, sname, space, traj);
            }
        }
}

inline std::string run_name(const BayesCase& nc, const std::string& signal, const bayes::Trajectory& traj) {
    return nc.name + " " + signal + " " + bayes::to_string(traj.utility) + ":" + bayes::to_string(traj.tie);
}

inline void bayes_geanakoplos(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    std::uint64_t runs = 0;
    bool stable = true, fixation = true, changes = true;
    std::size_t worst_fixation = 0, worst_changes = 0;
    std::vector<std::string> failures;
    for_each_bayes_run(c, [&](const BayesCase& nc, const std::string& sname, const bayes::ProfileSpace& space,
                              const bayes::Trajectory& traj) {
        ++runs;
        if (!traj.stable) {
            stable = false;
            failures.push_back(run_name(nc, sname, traj));
            return;
        }
        const auto fx = bayes::fixation_stats(traj, space);
        worst_fixation = std::max(worst_fixation, fx.max_fixation);
        worst_changes = std::max(worst_changes, fx.max_changes);
        if (fx.max_fixation > fx.bound_rounds) {
            fixation = false;
            failures.push_back(run_name(nc, sname, traj));
        }
        if (fx.max_changes > fx.profiles) changes = false;
    });
    r.estimates["runs"] = static_cast<double>(runs);
    r.estimates["max_fixation"] = static_cast<double>(worst_fixation);
    r.estimates["max_action_changes"] = static_cast<double>(worst_changes);
    r.check("stable_within_horizon", stable && runs > 0, join(failures));
    r.check("fixation_within_M_n", fixation, join(failures));
    r.check("action_changes_within_M", changes);
}

inline void bayes_agreement(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    std::uint64_t runs = 0;
    bool stable = true, beliefs = true, full = true, filtration = true, utility = true;
    std::vector<std::string> failures;
    for_each_bayes_run(c, [&](const BayesCase& nc, const std::string& sname, const bayes::ProfileSpace& space,
                              const bayes::Trajectory& traj) {
        ++runs;
        const auto agree = bayes::agreement_check(traj, space);
        const bool s = traj.stable, b = agree.beliefs_agree, f = bayes::full_information_check(traj, space).ok(),
                   fl = bayes::filtration_check(traj, space).ok(), u = bayes::utility_monotone_check(nc.net, traj);
        stable = stable && s;
        beliefs = beliefs && b;
        full = full && f;
        filtration = filtration && fl;
        utility = utility && u;
        if (!(s && b && f && fl && u)) failures.push_back(run_name(nc, sname, traj));
    });
    r.estimates["runs"] = static_cast<double>(runs);
    r.check("stable_within_horizon", stable && runs > 0);
    r.check("limit_beliefs_agree", beliefs, join(failures));
    r.check("limit_beliefs_equal_full_posterior", full, join(failures));
    r.check("belief_martingale_filtration", filtration);
    r.check("expected_utility_monotone", utility);
}

inline void bayes_xor(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto net = network_of(c);
    const auto space = bayes::build_profile_space(xor_table());
    const std::size_t horizon = c.horizon ? c.horizon : 10;
    const auto traj = bayes::run_exact(net, space, horizon, bayes::Utility::continuous);
    bool half = true;
    for (std::size_t t = 0; t <= horizon; ++t)
        for (Agent i = 0; i < net.size(); ++i)
            for (std::size_t p = 0; p < space.size(); ++p)
                if (traj.belief(i, t, p) != Rational(1, 2)) half = false;
    const auto table = xor_table();
    r.set_exact("signal_excess", delta_independence(profile_law(table), Rational(0)).excess);
    r.set_exact("signal_excess_given_state", delta_independence(profile_law_given(table, 1), Rational(0)).excess);
    r.estimates["full_information_mismatches"] = static_cast<double>(bayes::full_information_check(traj, space).mismatches);
    r.check("stable", traj.stable);
    r.check("beliefs_stay_half", half);
}

inline void bayes_discrete_agreement(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    std::uint64_t runs = 0;
    bool stable = true, equal = true;
    std::vector<std::string> failures;
    for_each_bayes_run(c, [&](const BayesCase& nc, const std::string& sname, const bayes::ProfileSpace& space,
                              const bayes::Trajectory& traj) {
        ++runs;
        stable = stable && traj.stable;
        if (!bayes::agreement_check(traj, space).utilities_agree) {
            equal = false;
            failures.push_back(run_name(nc, sname, traj));
        }
    });
    r.estimates["runs"] = static_cast<double>(runs);
    r.check("stable_within_horizon", stable && runs > 0);
    r.check("limit_utilities_equal", equal, join(failures));
}

inline void senate(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto sizes = option<std::vector<std::size_t>>(c, "n", {10, 20});
    const auto k = option<std::size_t>(c, "k", 5);
    const Rational delta = bernoulli_delta(c);
    std::optional<Rational> first;
    bool equal = true, agree = true;
    for (auto n : sizes) {
        const auto res = bayes::senate_scenario(n, k, delta);
        r.set_exact("senate_error[" + std::to_string(n) + "]", res.senate_error);
        r.set_exact("min_margin[" + std::to_string(n) + "]", res.min_margin);
        if (first && *first != res.senate_error) equal = false;
        first = res.senate_error;
        agree = agree && res.actions_agree;
    }
    r.check("senate_error_independent_of_n", equal);
    r.check("every_action_equals_senate", agree);
}

inline void chain_tie(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const Rational delta = bernoulli_delta(c);
    const auto claim_sizes = option<std::vector<std::size_t>>(c, "claim_n", {2, 3, 4, 5, 6, 7, 8});
    const auto bound_sizes = option<std::vector<std::size_t>>(c, "bound_n", {4, 6, 8});
    const double floor = option<double>(c, "pair_floor", 0.05);
    bool claim = true, stable = true, ordering = true;
    for (auto n : claim_sizes) {
        const auto res = bayes::chain_tie_to_self(n, delta, (std::size_t{1} << n) * n + 1);
        claim = claim && res.claim_holds;
        stable = stable && res.stable;
    }
    for (auto n : bound_sizes) {
        const auto res = bayes::chain_tie_to_self(n, delta, (std::size_t{1} << n) * n + 1);
        const std::string tag = "[" + std::to_string(n) + "]";
        r.set_exact("p_some_agent_wrong" + tag, res.some_agent_wrong);
        r.set_exact("p_adjacent_wrong_pair" + tag, res.adjacent_wrong_pair);
        if (!(res.some_agent_wrong >= res.adjacent_wrong_pair && to_double(res.adjacent_wrong_pair) > floor)) ordering = false;
    }
    r.check("stable_within_horizon", stable);
    r.check("twin_agents_keep_own_signal", claim);
    r.check("wrong_at_least_pair_above_floor", ordering);
}

inline void cascade_bounded(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto model = signal_of(c);
    const auto n = option<std::size_t>(c, "n", 16);
    const auto ex = cascade::run_sequence_exact(model, n);
    const auto tree = cascade::observer_tree(model, n);
    r.series["p_correct"] = rational_series(ex.correct);
    r.set_exact("plateau", ex.correct.back());
    r.set_exact("p_no_cascade", ex.no_cascade);
    bool joint_constant = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (ex.joint[i][j] != ex.joint[i][i]) joint_constant = false;
    bool weakly_increasing = true;
    for (std::size_t i = 1; i < n; ++i)
        if (ex.correct[i] < ex.correct[i - 1]) weakly_increasing = false;
    r.check("actions_constant_after_onset", ex.constant_after_onset);
    r.check("correct_and_cascaded_constant_after_onset", joint_constant);
    r.check("observer_copies_previous_action", ex.observer_copies);
    r.check("plateau_below_one", ex.correct.back() < 1);
    r.check("observer_belief_martingale", tree.martingale);
    r.check("tree_matches_enumeration", tree.correct == ex.correct);
    r.check("p_correct_weakly_increasing", weakly_increasing);
}

inline void cascade_unbounded(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto model = signal_of(c);
    const auto n = option<std::size_t>(c, "n", 50);
    const auto est = cascade::run_sequence_mc(model, n, c.trials, c.seed);
    const auto bounded = cascade::run_sequence_exact(parse_signal_spec(option<std::string>(c, "bounded_signal", "bernoulli:1/6")),
                                                     option<std::size_t>(c, "bounded_n", 16));
    const double plateau = to_double(bounded.correct.back());
    r.set_exact("bounded_plateau", bounded.correct.back());
    const auto& last = est.correct.back();
    r.set_proportion("p_correct_last", last);
    json curve = json::array();
    for (const auto& p : est.correct) curve.push_back(p.estimate());
    r.series["p_correct"] = curve;
    r.check("exceeds_bounded_plateau", last.estimate() - 3 * last.interval().half_width() > plateau,
            fmt(last.estimate()) + " vs " + fmt(plateau));
    r.check("observer_copies_previous_action", est.copy_violations == 0);
}

inline void retention_cycle(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const Rational delta = bernoulli_delta(c);
    std::optional<Rational> prev;
    bool nonincreasing = true;
    json trend = json::object();
    for (auto n : option<std::vector<std::size_t>>(c, "trend_n", {})) {
        const auto ret = majority::retention_exact(cycle(n), delta);
        r.set_exact("retention[" + std::to_string(n) + "]", ret.error);
        trend[std::to_string(n)] = to_string(ret.error);
        if (prev && ret.error > *prev) nonincreasing = false;
        prev = ret.error;
    }
    r.series["retention"] = trend;
    r.check("retention_nonincreasing", nonincreasing);
    bool map_odd = true, map_monotone = true;
    for (auto n : option<std::vector<std::size_t>>(c, "map_n", {})) {
        const auto props = majority::map_properties(majority::retention_exact(cycle(n), delta).map_rule, n);
        map_odd = map_odd && props.odd;
        map_monotone = map_monotone && props.monotone;
    }
    r.check("map_rule_odd", map_odd);
    r.check("map_rule_monotone", map_monotone);
    bool f_odd = true, f_monotone = true;
    for (auto n : option<std::vector<std::size_t>>(c, "function_n", {})) {
        const auto f = majority::limit_majority_function(cycle(n));
        f_odd = f_odd && majority::is_odd(f);
        f_monotone = f_monotone && majority::is_monotone(f);
    }
    r.check("limit_majority_function_odd", f_odd);
    r.check("limit_majority_function_monotone", f_monotone);
}

inline void senate_single(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto n = option<std::size_t>(c, "n", 10), k = option<std::size_t>(c, "k", 5);
    const auto res = bayes::senate_scenario(n, k, bernoulli_delta(c));
    r.set_exact("senate_error", res.senate_error);
    r.set_exact("min_margin", res.min_margin);
    r.check("every_action_equals_senate", res.actions_agree);
}

inline void chain_tie_single(const ExperimentConfig& c, Outcome& out) {
    auto& r = out.record;
    const auto n = option<std::size_t>(c, "n", 6);
    const auto res = bayes::chain_tie_to_self(n, bernoulli_delta(c), c.horizon ? c.horizon : (std::size_t{1} << n) * n + 1);
    r.set_exact("p_some_agent_wrong", res.some_agent_wrong);
    r.set_exact("p_adjacent_wrong_pair", res.adjacent_wrong_pair);
    r.estimates["max_fixation"] = static_cast<double>(res.max_fixation);
    r.check("stable_within_horizon", res.stable);
    r.check("twin_agents_keep_own_signal", res.claim_holds);
}

using Fn = std::function<void(const ExperimentConfig&, Outcome&)>;

inline const std::map<std::string, Fn>& table() {
    static const std::map<std::string, Fn> t{
        {"degroot-limit", degroot_limit},
        {"degroot-monotone", degroot_monotone},
        {"voter-eq1", voter_eq1},
        {"voter-learning", voter_learning},
        {"voter-absorption", voter_absorption},
        {"strong-voter-majority", strong_voter_majority},
        {"majority-period2", majority_period2},
        {"majority-russo", majority_russo},
        {"retention-cycle", retention_cycle},
        {"three-bit-map", three_bit_map},
        {"bayes-geanakoplos", bayes_geanakoplos},
        {"bayes-agreement", bayes_agreement},
        {"bayes-xor", bayes_xor},
        {"bayes-discrete-agreement", bayes_discrete_agreement},
        {"senate", senate},
        {"senate-single", senate_single},
        {"chain-tie", chain_tie},
        {"chain-tie-single", chain_tie_single},
        {"cascade-bounded", cascade_bounded},
        {"cascade-unbounded", cascade_unbounded},
    };
    return t;
}

} // namespace scenario

// ---------------------------------------------------------------------------------------
// Dispatch

/// Deterministic given the config: all randomness derives from config.seed.
inline Outcome run_experiment_full(const ExperimentConfig& config) {
    validate(config);
    Stopwatch clock;
    Outcome out;
    out.record.config = config;
    if (!config.scenario.empty()) {
        const auto& t = scenario::table();
        auto it = t.find(config.scenario);
        if (it == t.end()) throw std::invalid_argument("config field 'scenario': unknown scenario '" + config.scenario + "'");
        it->second(config, out);
    } else if (config.family == "degroot") plain::degroot(config, out);
    else if (config.family == "voter") plain::voter(config, out);
    else if (config.family == "voter-strong") plain::voter_strong(config, out);
    else if (config.family == "majority") plain::majority(config, out);
    else if (config.family == "bayes") plain::bayes_run(config, out);
    else if (config.family == "cascade") plain::cascade(config, out);
    else if (config.family == "three-bit") plain::three_bit(config, out);
    out.record.runtime_seconds = clock.seconds();
    return out;
}

inline ResultRecord run_experiment(const ExperimentConfig& config) { return run_experiment_full(config).record; }

// ---------------------------------------------------------------------------------------
// Registry

inline std::vector<std::string> delta_grid(int from, int to, int step, int denominator) {
    std::vector<std::string> out;
    for (int k = from; k <= to; k += step) out.push_back(to_string(make_rational(k, denominator)));
    return out;
}

// Designated initializers leave the remaining fields at their defaults.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wmissing-field-initializers"
inline const std::map<std::string, ExperimentConfig>& registry_table() {
    static const std::map<std::string, ExperimentConfig> t = [] {
        std::map<std::string, ExperimentConfig> m;
        auto add = [&](const std::string& name, ExperimentConfig c) {
            c.scenario = name;
            m[name] = std::move(c);
        };
        auto graphs = [](const std::string& kind, std::size_t from, std::size_t to, const std::string& suffix = "") {
            std::vector<std::string> g;
            for (std::size_t n = from; n <= to; ++n) g.push_back(kind + ":" + std::to_string(n) + suffix);
            return g;
        };
        auto strs = [](std::initializer_list<std::string> xs) { return json(std::vector<std::string>(xs)); };
        auto concat = [](std::vector<std::vector<std::string>> parts) {
            std::vector<std::string> out;
            for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
            return out;
        };

        add("degroot-limit", {.family = "degroot", .signal = "bernoulli:1/5", .seed = 11,
                              .options = {{"nets", 20}, {"n_min", 5}, {"n_max", 50}, {"extra_arcs", 3}, {"tv", 1e-9}, {"tolerance", 1e-8}}});
        add("degroot-monotone",
            {.family = "degroot",
             .options = {{"graphs", strs({"chain:11", "cycle:11", "complete:11", "star:12", "chain:5", "complete:3", "complete:5",
                                     "random_directed:12:2:3", "random_directed:9:2:4"})},
                         {"deltas", delta_grid(1, 9, 1, 20)},
                         {"small_delta", "1/100"},
                         {"small_tolerance", 0.02}}});
        add("voter-eq1", {.family = "voter", .options = {{"graphs", concat({graphs("chain", 2, 8), graphs("cycle", 3, 8), graphs("star", 3, 8)})}}});
        add("voter-learning", {.family = "voter", .graph = "cycle:20", .mode = "mc", .trials = 100000, .seed = 21,
                               .options = {{"deltas", strs({"1/10", "3/10"})}}});
        add("voter-absorption", {.family = "voter", .mode = "mc", .trials = 10000, .seed = 31, .options = {{"graphs", strs({"cycle:8", "cycle:16"})}}});
        add("strong-voter-majority", {.family = "voter-strong", .mode = "mc", .trials = 10000, .seed = 41,
                                      .options = {{"graphs", strs({"cycle:7", "grid:3x3", "grid:3x5"})}, {"tie_graph", "cycle:6"}, {"cap_factor", 1000}}});
        add("majority-period2",
            {.family = "majority",
             .options = {{"graphs", concat({graphs("cycle", 3, 8), {"complete:3", "complete:5", "complete:7"},
                                            graphs("complete", 2, 2, "+plain"), graphs("complete", 4, 4, "+plain"),
                                            graphs("complete", 6, 6, "+plain"), graphs("complete", 8, 8, "+plain"),
                                            {"star:4+plain", "star:6+plain", "star:8+plain", "bipartite:3x3+plain",
                                             "random_regular:8:4:1", "random_regular:8:3:2+plain"}})}}});
        add("majority-russo", {.family = "majority", .graph = "cycle:7",
                               .options = {{"deltas", delta_grid(0, 9, 1, 20)},
                                           {"dynamics_deltas", strs({"0", "1/10", "1/5", "3/10", "2/5"})},
                                           {"h", 1e-4},
                                           {"tolerance", 1e-6}}});
        add("retention-cycle", {.family = "majority", .signal = "bernoulli:3/10",
                                .options = {{"trend_n", {5, 7, 9, 11, 13, 15}},
                                            {"map_n", {3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
                                            {"function_n", {3, 5, 7, 9, 11}}}});
        add("three-bit-map", {.family = "three-bit",
                              .options = {{"p", delta_grid(55, 95, 5, 100)},
                                          {"delta_fractions", strs({"-9/10", "-3/5", "-3/10", "0", "3/10", "3/5", "9/10"})}}});
        const std::vector<std::string> small_nets = concat({graphs("chain", 2, 5), graphs("cycle", 3, 5)});
        add("bayes-geanakoplos", {.family = "bayes", .signal = "bernoulli:1/6",
                                  .options = {{"all_connected_up_to", 4}, {"rules", strs({"discrete:one", "discrete:own", "continuous"})}}});
        add("bayes-agreement", {.family = "bayes",
                                .options = {{"graphs", small_nets},
                                            {"signals", strs({"bernoulli:1/6", "finite:3:1/2,1/3,1/6;1/6,1/3,1/2"})},
                                            {"rules", strs({"continuous"})}}});
        add("bayes-xor", {.family = "bayes", .graph = "complete:2", .signal = "xor", .horizon = 10});
        add("bayes-discrete-agreement", {.family = "bayes",
                                         .options = {{"all_connected_up_to", 4},
                                                     {"graphs", small_nets},
                                                     {"signals", strs({"bernoulli:1/6", "finite:3:1/2,1/3,1/6;1/6,1/3,1/2"})},
                                                     {"rules", strs({"discrete:one", "discrete:own"})}}});
        add("senate", {.family = "bayes", .signal = "bernoulli:1/6", .options = {{"n", {10, 20}}, {"k", 5}}});
        add("chain-tie", {.family = "bayes", .signal = "bernoulli:1/6",
                          .options = {{"claim_n", {2, 3, 4, 5, 6, 7, 8}}, {"bound_n", {4, 6, 8}}, {"pair_floor", 0.05}}});
        add("cascade-bounded", {.family = "cascade", .signal = "bernoulli:1/6", .options = {{"n", 16}}});
        add("cascade-unbounded", {.family = "cascade", .signal = "gaussian:1", .mode = "mc", .trials = 100000, .seed = 51,
                                  .options = {{"n", 50}, {"bounded_signal", "bernoulli:1/6"}, {"bounded_n", 16}}});
        return m;
    }();
    return t;
}

#pragma GCC diagnostic pop

inline std::vector<std::string> registry_names() {
    std::vector<std::string> names;
    for (const auto& [name, c] : registry_table()) names.push_back(name);
    return names;
}

/// Canonical config for a named experiment; unknown names list the available ones.
inline ExperimentConfig registry(const std::string& name) {
    const auto& t = registry_table();
    auto it = t.find(name);
    if (it == t.end()) throw std::out_of_range("unknown experiment '" + name + "'; available: " + join(registry_names()));
    return it->second;
}

} // namespace opdyn::harness
