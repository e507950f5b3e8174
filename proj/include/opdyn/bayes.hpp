#pragma once

// Exact Bayesian repeated-action dynamics on a finite profile space.
//
// Agent i's information at round t is its own signal plus the actions of its out-neighbors
// in rounds < t. Each sigma-algebra is a partition of the profiles, so the engine tracks one
// partition per agent and refines it by the neighbors' actions after every round.

#include "opdyn/network.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/signals.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn::bayes {

// ---------------------------------------------------------------------------------------
// Profile space

struct Profile {
    std::vector<Symbol> signals;
    Rational w0;  // P(S = 0, profile)
    Rational w1;  // P(S = 1, profile)
    Rational weight() const { return w0 + w1; }
    /// P(S = 1 | all signals).
    Rational posterior() const { return w1 / (w0 + w1); }
};

struct ProfileSpace {
    std::size_t agents = 0;
    std::vector<Profile> profiles;  // positive total weight only
    bool conditionally_independent = true;
    std::size_t size() const { return profiles.size(); }  // M

    void validate() const {
        Rational total = 0;
        for (const auto& p : profiles) {
            if (p.signals.size() != agents) throw std::invalid_argument("profile space: profile has wrong length");
            if (p.w0 < 0 || p.w1 < 0 || p.weight() == 0) throw std::invalid_argument("profile space: bad weight");
            total += p.weight();
        }
        if (total != 1) throw std::invalid_argument("profile space: weights do not sum to 1");
    }
};

inline constexpr std::uint64_t kProfileSpaceCap = 1'000'000;

/// (1/2) prod mu_S(psi_i) for every profile in Omega^n.
inline ProfileSpace build_profile_space(const SignalModel& model, std::size_t n) {
    if (n == 0) throw std::invalid_argument("build_profile_space: n must be >= 1");
    const FiniteSignal f = model.finite_view();
    const std::size_t k = f.alphabet_size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= k;
        if (total > kProfileSpaceCap) throw std::length_error("build_profile_space: |Omega|^n exceeds 10^6");
    }
    ProfileSpace space;
    space.agents = n;
    space.profiles.reserve(total);
    std::vector<Symbol> digits(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Rational w0 = Rational(1, 2), w1 = Rational(1, 2);
        for (std::size_t i = 0; i < n; ++i) {
            w0 *= f.mu0[digits[i]];
            w1 *= f.mu1[digits[i]];
        }
        space.profiles.push_back({digits, w0, w1});
        for (std::size_t i = 0; i < n; ++i) {
            if (++digits[i] < k) break;
            digits[i] = 0;
        }
    }
    return space;
}

/// Space from an explicit joint table; entries sharing a profile are merged.
inline ProfileSpace build_profile_space(const JointTable& table) {
    table.validate();
    std::map<std::vector<Symbol>, std::pair<Rational, Rational>> merged;
    for (const auto& e : table.entries) {
        auto& slot = merged[e.profile];
        (e.state ? slot.second : slot.first) += e.weight;
    }
    ProfileSpace space;
    space.agents = table.agents;
    space.conditionally_independent = false;
    for (auto& [profile, w] : merged)
        if (w.first + w.second > 0) space.profiles.push_back({profile, w.first, w.second});
    return space;
}

// ---------------------------------------------------------------------------------------
// Engine

enum class Utility { discrete, continuous };
/// Discrete-utility action when the belief is exactly 1/2.
enum class TieRule { choose_one, own_signal };

inline std::string to_string(Utility u) { return u == Utility::discrete ? "discrete" : "continuous"; }
inline std::string to_string(TieRule r) { return r == TieRule::choose_one ? "one" : "own"; }

struct Round {
    std::vector<std::vector<std::uint32_t>> cell;  // [agent][profile]
    std::vector<std::vector<Rational>> w0;         // [agent][cell]
    std::vector<std::vector<Rational>> w1;         // [agent][cell]
    std::vector<std::vector<Rational>> belief;     // [agent][cell]
    std::vector<std::vector<Rational>> action;     // [agent][cell]
    std::size_t cells(Agent i) const { return belief[i].size(); }
};

struct Trajectory {
    Utility utility = Utility::discrete;
    TieRule tie = TieRule::choose_one;
    std::vector<Round> rounds;  // rounds[t] for t = 0..last
    bool stable = false;        // partitions at the last round equal those one round later
    std::size_t agents() const { return rounds.front().cell.size(); }
    std::size_t last() const { return rounds.size() - 1; }

    /// Values past the last stored round equal those at the last round once stable.
    const Round& at(std::size_t t) const { return rounds[std::min(t, last())]; }
    const Rational& belief(Agent i, std::size_t t, std::size_t p) const { return at(t).belief[i][at(t).cell[i][p]]; }
    const Rational& action(Agent i, std::size_t t, std::size_t p) const { return at(t).action[i][at(t).cell[i][p]]; }
};

namespace detail {

inline Rational discrete_action(const Rational& belief, const Rational& private_belief, TieRule tie) {
    const Rational half(1, 2);
    if (belief > half) return 1;
    if (belief < half) return 0;
    if (tie == TieRule::choose_one) return 1;
    return private_belief < half ? 0 : 1;
}

inline std::vector<Rational> private_beliefs(const ProfileSpace& space, Agent i) {
    // P(S = 1 | psi_i) from the space itself so joint tables are handled too.
    std::map<Symbol, std::pair<Rational, Rational>> by_symbol;
    for (const auto& p : space.profiles) {
        auto& s = by_symbol[p.signals[i]];
        s.first += p.w0;
        s.second += p.w1;
    }
    std::vector<Rational> out;
    for (const auto& p : space.profiles) {
        const auto& s = by_symbol[p.signals[i]];
        out.push_back(s.second / (s.first + s.second));
    }
    return out;
}

/// Fills weights, beliefs and actions of a round whose cells are already assigned.
inline void evaluate(Round& r, const ProfileSpace& space, const std::vector<std::vector<Rational>>& own_belief,
                     Utility utility, TieRule tie) {
    const std::size_t n = r.cell.size();
    r.w0.assign(n, {});
    r.w1.assign(n, {});
    r.belief.assign(n, {});
    r.action.assign(n, {});
    for (Agent i = 0; i < n; ++i) {
        std::uint32_t cells = 0;
        for (auto c : r.cell[i]) cells = std::max(cells, c + 1);
        r.w0[i].assign(cells, Rational(0));
        r.w1[i].assign(cells, Rational(0));
        std::vector<std::size_t> representative(cells, 0);
        for (std::size_t p = 0; p < space.size(); ++p) {
            r.w0[i][r.cell[i][p]] += space.profiles[p].w0;
            r.w1[i][r.cell[i][p]] += space.profiles[p].w1;
            representative[r.cell[i][p]] = p;
        }
        for (std::uint32_t c = 0; c < cells; ++c) {
            Rational b = r.w1[i][c] / (r.w0[i][c] + r.w1[i][c]);
            r.action[i].push_back(utility == Utility::continuous ? b : discrete_action(b, own_belief[i][representative[c]], tie));
            r.belief[i].push_back(std::move(b));
        }
    }
}

/// Relabels cells in order of first appearance so equal partitions compare equal.
template <typename Key>
std::vector<std::uint32_t> canonical_cells(const std::vector<Key>& keys) {
    std::map<Key, std::uint32_t> ids;
    std::vector<std::uint32_t> out;
    out.reserve(keys.size());
    for (const auto& k : keys) {
        auto [it, inserted] = ids.emplace(k, static_cast<std::uint32_t>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

} // namespace detail

/// Size cap on agents x profiles x rounds.
inline constexpr std::uint64_t kEngineCap = 200'000'000;

/// Forward induction until every agent's partition stops refining, or `horizon` rounds.
inline Trajectory run_exact(const Network& net, const ProfileSpace& space, std::size_t horizon, Utility utility,
                            TieRule tie = TieRule::choose_one) {
    require_valid(net, false);
    if (space.agents != net.size()) throw std::invalid_argument("run_exact: profile space and network sizes differ");
    if (horizon < 1) throw std::invalid_argument("run_exact: horizon must be >= 1");
    if (static_cast<std::uint64_t>(net.size()) * space.size() * horizon > kEngineCap)
        throw std::length_error("run_exact: n x M x horizon exceeds the engine cap");
    const std::size_t n = net.size(), m = space.size();

    std::vector<std::vector<Rational>> own(n);
    for (Agent i = 0; i < n; ++i) own[i] = detail::private_beliefs(space, i);

    Trajectory traj;
    traj.utility = utility;
    traj.tie = tie;
    Round r0;
    r0.cell.resize(n);
    for (Agent i = 0; i < n; ++i) {
        std::vector<Symbol> keys;
        for (const auto& p : space.profiles) keys.push_back(p.signals[i]);
        r0.cell[i] = detail::canonical_cells(keys);
    }
    detail::evaluate(r0, space, own, utility, tie);
    traj.rounds.push_back(std::move(r0));

    while (traj.rounds.size() <= horizon) {
        const Round& prev = traj.rounds.back();
        // Per-agent ids of distinct actions in the previous round.
        std::vector<std::vector<std::uint32_t>> action_id(n, std::vector<std::uint32_t>(m));
        for (Agent j = 0; j < n; ++j) {
            std::map<Rational, std::uint32_t> ids;
            for (std::size_t p = 0; p < m; ++p) {
                const auto& a = prev.action[j][prev.cell[j][p]];
                action_id[j][p] = ids.emplace(a, static_cast<std::uint32_t>(ids.size())).first->second;
            }
        }
        Round next;
        next.cell.resize(n);
        bool changed = false;
        for (Agent i = 0; i < n; ++i) {
            std::vector<std::vector<std::uint32_t>> keys(m);
            for (std::size_t p = 0; p < m; ++p) {
                keys[p].push_back(prev.cell[i][p]);
                for (const auto& a : net.out(i))
                    if (a.target != i) keys[p].push_back(action_id[a.target][p]);
            }
            next.cell[i] = detail::canonical_cells(keys);
            if (next.cell[i] != prev.cell[i]) changed = true;
        }
        if (!changed) {
            traj.stable = true;
            break;
        }
        detail::evaluate(next, space, own, utility, tie);
        traj.rounds.push_back(std::move(next));
    }
    return traj;
}

// ---------------------------------------------------------------------------------------
// Property checks

struct FixationStats {
    std::size_t profiles = 0;           // M
    std::size_t bound_rounds = 0;       // M * n
    std::size_t max_fixation = 0;       // over profiles
    std::size_t max_changes = 0;        // over agents and profiles
    std::vector<std::size_t> fixation;  // per profile
    bool within_bounds() const { return max_fixation <= bound_rounds && max_changes <= profiles; }
};

inline FixationStats fixation_stats(const Trajectory& traj, const ProfileSpace& space) {
    if (!traj.stable) throw std::runtime_error("fixation_stats: horizon too small to certify fixation");
    FixationStats s;
    s.profiles = space.size();
    s.bound_rounds = space.size() * traj.agents();
    s.fixation.assign(space.size(), 0);
    for (std::size_t p = 0; p < space.size(); ++p) {
        for (Agent i = 0; i < traj.agents(); ++i) {
            std::size_t changes = 0;
            for (std::size_t t = 0; t < traj.last(); ++t) {
                if (traj.action(i, t + 1, p) != traj.action(i, t, p)) {
                    ++changes;
                    s.fixation[p] = std::max(s.fixation[p], t + 1);
                }
            }
            s.max_changes = std::max(s.max_changes, changes);
        }
        s.max_fixation = std::max(s.max_fixation, s.fixation[p]);
    }
    return s;
}

/// E[u(S, A^i_t)]: discrete u = 1{a = S}; continuous u = -(a - S)^2.
inline Rational expected_utility(const Trajectory& traj, Agent i, std::size_t t) {
    const Round& r = traj.at(t);
    Rational e = 0;
    for (std::size_t c = 0; c < r.cells(i); ++c) {
        const Rational& a = r.action[i][c];
        if (traj.utility == Utility::discrete) e += a == 1 ? r.w1[i][c] : r.w0[i][c];
        else e -= r.w0[i][c] * a * a + r.w1[i][c] * (1 - a) * (1 - a);
    }
    return e;
}

struct AgreementReport {
    bool beliefs_agree = true;              // continuous: per profile
    bool utilities_agree = true;            // limit expected utilities equal across agents
    std::vector<Rational> limit_utilities;  // per agent
    bool ok(Utility u) const { return u == Utility::continuous ? beliefs_agree && utilities_agree : utilities_agree; }
};

inline AgreementReport agreement_check(const Trajectory& traj, const ProfileSpace& space) {
    AgreementReport rep;
    const std::size_t t = traj.last(), n = traj.agents();
    for (std::size_t p = 0; p < space.size(); ++p)
        for (Agent i = 1; i < n; ++i)
            if (traj.belief(i, t, p) != traj.belief(0, t, p)) rep.beliefs_agree = false;
    for (Agent i = 0; i < n; ++i) rep.limit_utilities.push_back(expected_utility(traj, i, t));
    for (const auto& u : rep.limit_utilities)
        if (u != rep.limit_utilities.front()) rep.utilities_agree = false;
    return rep;
}

struct FullInformationReport {
    std::size_t mismatches = 0;  // profiles whose limit beliefs differ from P(S=1 | all signals)
    bool ok() const { return mismatches == 0; }
};

inline FullInformationReport full_information_check(const Trajectory& traj, const ProfileSpace& space) {
    FullInformationReport rep;
    for (std::size_t p = 0; p < space.size(); ++p) {
        const Rational full = space.profiles[p].posterior();
        for (Agent i = 0; i < traj.agents(); ++i)
            if (traj.belief(i, traj.last(), p) != full) {
                ++rep.mismatches;
                break;
            }
    }
    return rep;
}

/// Martingale tower, calibration and refinement checks over every stored round.
struct FiltrationReport {
    bool refinement = true;   // partition at t+1 refines partition at t
    bool tower = true;        // cell weight x belief equals the sum over its refinements
    bool calibration = true;  // stored belief equals P(S = 1 | cell) recomputed from profiles
    bool ok() const { return refinement && tower && calibration; }
};

inline FiltrationReport filtration_check(const Trajectory& traj, const ProfileSpace& space) {
    FiltrationReport rep;
    const std::size_t n = traj.agents(), m = space.size();
    for (std::size_t t = 0; t <= traj.last(); ++t) {
        const Round& r = traj.rounds[t];
        for (Agent i = 0; i < n; ++i) {
            std::vector<Rational> ones(r.cells(i), Rational(0)), mass(r.cells(i), Rational(0));
            for (std::size_t p = 0; p < m; ++p) {
                ones[r.cell[i][p]] += space.profiles[p].w1;
                mass[r.cell[i][p]] += space.profiles[p].weight();
            }
            for (std::size_t c = 0; c < r.cells(i); ++c)
                if (ones[c] / mass[c] != r.belief[i][c]) rep.calibration = false;
            if (t == traj.last()) continue;
            const Round& nx = traj.rounds[t + 1];
            std::vector<std::int64_t> parent(nx.cells(i), -1);
            std::vector<Rational> refined(r.cells(i), Rational(0));
            for (std::size_t p = 0; p < m; ++p) {
                auto& slot = parent[nx.cell[i][p]];
                if (slot == -1) slot = r.cell[i][p];
                else if (slot != static_cast<std::int64_t>(r.cell[i][p])) rep.refinement = false;
            }
            for (std::size_t c = 0; c < nx.cells(i); ++c)
                if (parent[c] >= 0)
                    refined[static_cast<std::size_t>(parent[c])] += (nx.w0[i][c] + nx.w1[i][c]) * nx.belief[i][c];
            for (std::size_t c = 0; c < r.cells(i); ++c)
                if (refined[c] != (r.w0[i][c] + r.w1[i][c]) * r.belief[i][c]) rep.tower = false;
        }
    }
    return rep;
}

/// E[U^i_{t+1}] >= E[U^i_t] and E[U^i_{t+1}] >= E[U^j_t] for observed j.
inline bool utility_monotone_check(const Network& net, const Trajectory& traj) {
    for (std::size_t t = 0; t < traj.last(); ++t)
        for (Agent i = 0; i < traj.agents(); ++i) {
            const Rational next = expected_utility(traj, i, t + 1);
            if (next < expected_utility(traj, i, t)) return false;
            for (const auto& a : net.out(i))
                if (next < expected_utility(traj, a.target, t)) return false;
        }
    return true;
}

/// For each round t: profiles agreeing on the signals in ball(i, t) give agent i the same
/// observed actions I^i_t and the same action A^i_t.
struct LocalityReport {
    std::size_t violations = 0;
    std::size_t groups = 0;  // number of ball-restriction classes examined
    bool ok() const { return violations == 0; }
};

inline LocalityReport locality_check(const Network& net, const ProfileSpace& space, const Trajectory& traj, Agent i,
                                     std::size_t t) {
    if (i >= net.size()) throw std::out_of_range("locality_check: agent out of range");
    const auto dist = net.distances_from(i);
    std::vector<Agent> inside;
    for (Agent j = 0; j < net.size(); ++j)
        if (dist[j] <= t) inside.push_back(j);
    std::vector<Agent> observed;
    for (const auto& a : net.out(i))
        if (a.target != i) observed.push_back(a.target);

    std::map<std::vector<Symbol>, std::vector<Rational>> seen;
    LocalityReport rep;
    for (std::size_t p = 0; p < space.size(); ++p) {
        std::vector<Symbol> key;
        for (Agent j : inside) key.push_back(space.profiles[p].signals[j]);
        std::vector<Rational> info;
        for (std::size_t s = 0; s < t; ++s)
            for (Agent j : observed) info.push_back(traj.action(j, s, p));
        info.push_back(traj.action(i, t, p));
        auto [it, inserted] = seen.emplace(std::move(key), info);
        if (inserted) ++rep.groups;
        else if (it->second != info) ++rep.violations;
    }
    return rep;
}

// ---------------------------------------------------------------------------------------
// Named examples

/// Senate: agents 0..k-1 form the senate; A_S is the MAP of their signals and every agent
/// knows (psi_i, A_S). Signals equal S with probability 1/2 + delta.
struct SenateResult {
    std::size_t n = 0, k = 0;
    Rational senate_error;          // P(A_S != S)
    bool actions_agree = true;      // every agent's MAP action equals A_S on every profile
    Rational min_margin;            // min over agents/cells of |P(S = A_S | F_i) - 1/2|
};

inline SenateResult senate_scenario(std::size_t n, std::size_t k, const Rational& delta) {
    if (k % 2 == 0) throw std::invalid_argument("senate_scenario: senate size must be odd");
    if (n <= k) throw std::invalid_argument("senate_scenario: need n > k");
    if (n > 20) throw std::length_error("senate_scenario: exact mode supports n <= 20");
    if (delta <= 0 || delta >= Rational(1, 2)) throw std::invalid_argument("senate_scenario: delta must lie in (0, 1/2)");
    const Rational p = Rational(1, 2) + delta;
    const Integer a = p.get_num(), b = p.get_den(), c = b - a;
    // Integer weights over the common denominator 2 b^n: S = 1 gives a^ones c^(n-ones).
    std::vector<Integer> weight1(n + 1), weight0(n + 1);
    for (std::size_t ones = 0; ones <= n; ++ones) {
        Integer x, y;
        mpz_pow_ui(x.get_mpz_t(), a.get_mpz_t(), ones);
        mpz_pow_ui(y.get_mpz_t(), c.get_mpz_t(), n - ones);
        weight1[ones] = x * y;
        mpz_pow_ui(x.get_mpz_t(), c.get_mpz_t(), ones);
        mpz_pow_ui(y.get_mpz_t(), a.get_mpz_t(), n - ones);
        weight0[ones] = x * y;
    }
    const std::uint64_t senate_mask = (std::uint64_t{1} << k) - 1;
    // count[i][psi_i][A_S][ones]
    std::vector<std::uint64_t> count(n * 4 * (n + 1), 0);
    std::vector<std::uint64_t> verdict(2 * (n + 1), 0);  // [A_S][ones]
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto ones = static_cast<std::size_t>(__builtin_popcountll(x));
        const std::size_t as = static_cast<std::size_t>(__builtin_popcountll(x & senate_mask)) * 2 > k ? 1 : 0;
        ++verdict[as * (n + 1) + ones];
        for (std::size_t i = 0; i < n; ++i) ++count[((i * 2 + ((x >> i) & 1u)) * 2 + as) * (n + 1) + ones];
    }
    SenateResult res;
    res.n = n;
    res.k = k;
    Integer error = 0;
    for (std::size_t ones = 0; ones <= n; ++ones) {
        error += Integer(static_cast<unsigned long>(verdict[ones])) * weight1[ones];           // A_S = 0, S = 1
        error += Integer(static_cast<unsigned long>(verdict[(n + 1) + ones])) * weight0[ones]; // A_S = 1, S = 0
    }
    Integer denom;
    mpz_pow_ui(denom.get_mpz_t(), b.get_mpz_t(), n);
    res.senate_error = Rational(error, 2 * denom);
    res.senate_error.canonicalize();
    res.min_margin = Rational(1, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t as = 0; as < 2; ++as) {
                Integer w1 = 0, w0 = 0;
                for (std::size_t ones = 0; ones <= n; ++ones) {
                    const Integer cnt(static_cast<unsigned long>(count[((i * 2 + s) * 2 + as) * (n + 1) + ones]));
                    w1 += cnt * weight1[ones];
                    w0 += cnt * weight0[ones];
                }
                if (w1 + w0 == 0) continue;
                const std::size_t action = w1 >= w0 ? 1 : 0;
                if (action != as) res.actions_agree = false;
                Rational margin(w1 - w0, 2 * (w1 + w0));
                margin.canonicalize();
                margin = abs(margin);
                if (margin < res.min_margin) res.min_margin = margin;
            }
    return res;
}

/// Undirected chain with tie-to-own-signal: agents with an equal-signal neighbor keep their signal.
struct ChainTieResult {
    std::size_t n = 0;
    bool stable = false;
    bool claim_holds = true;      // every such agent plays psi_i in every round
    Rational some_agent_wrong;    // P(some agent's limit action != S)
    Rational adjacent_wrong_pair; // P(two adjacent agents both have psi != S)
    std::size_t max_fixation = 0;
};

inline ChainTieResult chain_tie_to_self(std::size_t n, const Rational& delta, std::size_t horizon) {
    const auto net = chain(n);
    const auto space = build_profile_space(SignalModel::bernoulli(delta), n);
    const auto traj = run_exact(net, space, horizon, Utility::discrete, TieRule::own_signal);
    ChainTieResult res;
    res.n = n;
    res.stable = traj.stable;
    res.some_agent_wrong = 0;
    res.adjacent_wrong_pair = 0;
    if (traj.stable) res.max_fixation = fixation_stats(traj, space).max_fixation;
    for (std::size_t p = 0; p < space.size(); ++p) {
        const auto& prof = space.profiles[p];
        for (Agent i = 0; i < n; ++i) {
            const bool twin = (i > 0 && prof.signals[i - 1] == prof.signals[i]) ||
                              (i + 1 < n && prof.signals[i + 1] == prof.signals[i]);
            if (!twin) continue;
            for (std::size_t t = 0; t <= traj.last(); ++t)
                if (traj.action(i, t, p) != Rational(static_cast<long>(prof.signals[i]))) res.claim_holds = false;
        }
        for (int s = 0; s < 2; ++s) {
            const Rational& w = s ? prof.w1 : prof.w0;
            bool wrong = false, pair = false;
            for (Agent i = 0; i < n; ++i) {
                if (traj.action(i, traj.last(), p) != s) wrong = true;
                if (i + 1 < n && static_cast<int>(prof.signals[i]) != s && static_cast<int>(prof.signals[i + 1]) != s) pair = true;
            }
            if (wrong) res.some_agent_wrong += w;
            if (pair) res.adjacent_wrong_pair += w;
        }
    }
    return res;
}

} // namespace opdyn::bayes
