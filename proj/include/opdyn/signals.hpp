#pragma once

// The state of the world and private signals: S is uniform on {0,1} and, given S, the
// private signals are i.i.d. draws from mu_S. Finite alphabets carry exact rational
// measures; the Gaussian family is the parametric witness for unbounded private beliefs.

#include "opdyn/rational.hpp"
#include "opdyn/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace opdyn {

using Symbol = std::size_t;

/// Two strictly positive measures on the alphabet {0, ..., size-1}.
struct FiniteSignal {
    std::vector<Rational> mu0;
    std::vector<Rational> mu1;
    std::size_t alphabet_size() const { return mu0.size(); }
};

/// Binary signal equal to S with probability 1/2 + delta.
struct BernoulliSignal {
    Rational delta;
};

/// Signal = (2S - 1) + N(0, variance).
struct GaussianSignal {
    double variance = 1.0;
};

class SignalModel {
public:
    using Variant = std::variant<FiniteSignal, BernoulliSignal, GaussianSignal>;

    static SignalModel finite(std::vector<Rational> mu0, std::vector<Rational> mu1) {
        if (mu0.size() != mu1.size() || mu0.empty()) throw std::invalid_argument("finite signal: measures must share a nonempty alphabet");
        Rational s0 = 0, s1 = 0;
        for (std::size_t x = 0; x < mu0.size(); ++x) {
            if (mu0[x] <= 0 || mu1[x] <= 0)
                throw std::invalid_argument("finite signal: measures must be strictly positive (mutually absolutely continuous)");
            s0 += mu0[x];
            s1 += mu1[x];
        }
        if (s0 != 1 || s1 != 1) throw std::invalid_argument("finite signal: each measure must sum to exactly 1");
        return SignalModel(FiniteSignal{std::move(mu0), std::move(mu1)});
    }

    static SignalModel bernoulli(const Rational& delta) {
        if (delta <= 0 || delta >= Rational(1, 2)) throw std::invalid_argument("bernoulli signal: delta must lie in (0, 1/2)");
        return SignalModel(BernoulliSignal{delta});
    }

    static SignalModel gaussian(double variance) {
        if (!(variance > 0.0) || !std::isfinite(variance)) throw std::invalid_argument("gaussian signal: variance must be positive");
        return SignalModel(GaussianSignal{variance});
    }

    const Variant& variant() const { return v_; }
    bool is_finite() const { return !std::holds_alternative<GaussianSignal>(v_); }
    bool is_gaussian() const { return std::holds_alternative<GaussianSignal>(v_); }
    double variance() const { return std::get<GaussianSignal>(v_).variance; }

    /// Finite view; Bernoulli(delta) expands to alphabet {0,1} with mu_s(s) = 1/2 + delta.
    FiniteSignal finite_view() const {
        if (const auto* f = std::get_if<FiniteSignal>(&v_)) return *f;
        if (const auto* b = std::get_if<BernoulliSignal>(&v_)) {
            const Rational hi = Rational(1, 2) + b->delta, lo = Rational(1, 2) - b->delta;
            return FiniteSignal{{hi, lo}, {lo, hi}};
        }
        throw std::logic_error("gaussian signal model has no finite alphabet");
    }

    std::size_t alphabet_size() const { return finite_view().alphabet_size(); }

    std::string describe() const {
        if (const auto* b = std::get_if<BernoulliSignal>(&v_)) return "bernoulli:" + to_string(b->delta);
        if (const auto* g = std::get_if<GaussianSignal>(&v_)) {
            std::ostringstream os;
            os << "gaussian:" << g->variance;
            return os.str();
        }
        const auto& f = std::get<FiniteSignal>(v_);
        std::string s = "finite:" + std::to_string(f.alphabet_size()) + ":";
        for (std::size_t x = 0; x < f.alphabet_size(); ++x) s += (x ? "," : "") + to_string(f.mu0[x]);
        s += ";";
        for (std::size_t x = 0; x < f.alphabet_size(); ++x) s += (x ? "," : "") + to_string(f.mu1[x]);
        return s;
    }

private:
    explicit SignalModel(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// Text format: alphabet size, then a row of mu0 and a row of mu1 (rationals or decimals).
inline SignalModel read_signal_model(std::istream& in) {
    std::size_t k = 0;
    if (!(in >> k) || k == 0) throw std::invalid_argument("signal file: expected alphabet size");
    std::vector<Rational> mu0(k), mu1(k);
    std::string tok;
    for (auto* row : {&mu0, &mu1})
        for (std::size_t x = 0; x < k; ++x) {
            if (!(in >> tok)) throw std::invalid_argument("signal file: expected " + std::to_string(k) + " entries per row");
            (*row)[x] = parse_rational(tok);
        }
    return SignalModel::finite(std::move(mu0), std::move(mu1));
}

/// Parses `bernoulli:<delta>`, `gaussian:<variance>`, `file:<path>`, or the inline
/// `finite:<k>:<mu0 entries>;<mu1 entries>` with comma-separated entries.
inline SignalModel parse_signal_spec(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("signal spec '" + spec + "' must be kind:value");
    const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "bernoulli") return SignalModel::bernoulli(parse_rational(arg));
    if (kind == "gaussian") return SignalModel::gaussian(std::stod(arg));
    if (kind == "finite") {
        std::string text = arg;
        std::replace(text.begin(), text.end(), ':', ' ');
        std::replace(text.begin(), text.end(), ',', ' ');
        std::replace(text.begin(), text.end(), ';', ' ');
        std::istringstream in(text);
        return read_signal_model(in);
    }
    if (kind == "file") {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open signal file '" + arg + "'");
        return read_signal_model(in);
    }
    throw std::invalid_argument("unknown signal kind '" + kind + "'");
}

// ---------------------------------------------------------------------------------------
// Joint (non-product) tables

struct JointEntry {
    int state;                  // S in {0,1}
    std::vector<Symbol> profile;
    Rational weight;
};

/// Explicit joint law of (S, signal profile). Used for counterexamples such as XOR.
struct JointTable {
    std::size_t agents = 0;
    std::size_t alphabet = 0;
    std::vector<JointEntry> entries;

    void validate() const {
        Rational total = 0;
        for (const auto& e : entries) {
            if (e.state != 0 && e.state != 1) throw std::invalid_argument("joint table: state must be 0 or 1");
            if (e.profile.size() != agents) throw std::invalid_argument("joint table: profile length mismatch");
            for (Symbol x : e.profile)
                if (x >= alphabet) throw std::invalid_argument("joint table: symbol outside alphabet");
            if (e.weight <= 0) throw std::invalid_argument("joint table: weights must be positive");
            total += e.weight;
        }
        if (total != 1) throw std::invalid_argument("joint table: weights must sum to 1");
    }
};

/// Two fair independent bits with S = psi_1 XOR psi_2.
inline JointTable xor_table() {
    JointTable t{2, 2, {}};
    for (Symbol a = 0; a < 2; ++a)
        for (Symbol b = 0; b < 2; ++b) t.entries.push_back({static_cast<int>(a ^ b), {a, b}, Rational(1, 4)});
    return t;
}

// ---------------------------------------------------------------------------------------
// Sampling

struct WorldSample {
    int state = 0;
    std::vector<Symbol> symbols;  // finite models
    std::vector<double> values;   // gaussian model
};

namespace detail {

inline Symbol sample_categorical(const std::vector<Rational>& mu, Stream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (Symbol x = 0; x + 1 < mu.size(); ++x) {
        acc += to_double(mu[x]);
        if (u < acc) return x;
    }
    return mu.size() - 1;
}

} // namespace detail

/// Draws (S, psi) for n agents. S comes from the trial's shared lane; agent i's signal
/// from lane i, so each coordinate is reproducible on its own.
inline WorldSample sample_world(const SignalModel& model, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
    if (n == 0) throw std::invalid_argument("sample_world: n must be >= 1");
    WorldSample w;
    Stream shared(seed, trial);
    w.state = shared.bernoulli(0.5) ? 1 : 0;
    if (model.is_gaussian()) {
        const double sd = std::sqrt(model.variance());
        const double mean = w.state ? 1.0 : -1.0;
        w.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            Stream lane(seed, trial, i);
            w.values[i] = mean + sd * lane.normal();
        }
        return w;
    }
    const FiniteSignal f = model.finite_view();
    const auto& mu = w.state ? f.mu1 : f.mu0;
    w.symbols.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream lane(seed, trial, i);
        w.symbols[i] = detail::sample_categorical(mu, lane);
    }
    return w;
}

inline WorldSample sample_joint(const JointTable& table, std::uint64_t seed, std::uint64_t trial) {
    Stream shared(seed, trial);
    const double u = shared.uniform();
    double acc = 0.0;
    const JointEntry* pick = &table.entries.back();
    for (const auto& e : table.entries) {
        acc += to_double(e.weight);
        if (u < acc) {
            pick = &e;
            break;
        }
    }
    return WorldSample{pick->state, pick->profile, {}};
}

// ---------------------------------------------------------------------------------------
// Beliefs and likelihoods

struct BeliefValue {
    double b = 0.5;                 // P(S = 1 | information)
    std::optional<Rational> exact;  // set for finite models
    double llr() const { return std::log(b / (1.0 - b)); }
};

/// B_0 = P(S=1 | psi = x) = mu1(x) / (mu0(x) + mu1(x)).
inline BeliefValue private_belief(const SignalModel& model, Symbol x) {
    const FiniteSignal f = model.finite_view();
    if (x >= f.alphabet_size()) throw std::out_of_range("private_belief: signal outside alphabet");
    Rational b = f.mu1[x] / (f.mu0[x] + f.mu1[x]);
    return BeliefValue{to_double(b), b};
}

/// Gaussian private belief: logistic of the log-likelihood ratio 2x / variance.
inline BeliefValue private_belief_at(const SignalModel& model, double x) {
    if (!model.is_gaussian()) throw std::invalid_argument("private_belief_at: model is not gaussian");
    const double llr = 2.0 * x / model.variance();
    return BeliefValue{1.0 / (1.0 + std::exp(-llr)), std::nullopt};
}

/// P_x = mu0(x) / mu1(x).
inline Rational private_likelihood(const SignalModel& model, Symbol x) {
    const FiniteSignal f = model.finite_view();
    if (x >= f.alphabet_size()) throw std::out_of_range("private_likelihood: signal outside alphabet");
    return f.mu0[x] / f.mu1[x];
}

struct BeliefSupport {
    bool bounded = true;
    Rational low, high;  // extremes of the private belief (bounded models only)
};

inline BeliefSupport belief_support(const SignalModel& model) {
    if (model.is_gaussian()) return BeliefSupport{false, 0, 1};
    const FiniteSignal f = model.finite_view();
    BeliefSupport s{true, 1, 0};
    for (Symbol x = 0; x < f.alphabet_size(); ++x) {
        Rational b = f.mu1[x] / (f.mu0[x] + f.mu1[x]);
        if (b < s.low) s.low = b;
        if (b > s.high) s.high = b;
    }
    return s;
}

// ---------------------------------------------------------------------------------------
// Distribution distances

template <typename T>
T tv_distance(std::span<const T> p, std::span<const T> q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: supports differ");
    T sp = 0, sq = 0, d = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] < 0 || q[k] < 0) throw std::invalid_argument("tv_distance: negative mass");
        sp += p[k];
        sq += q[k];
        d += p[k] > q[k] ? T(p[k] - q[k]) : T(q[k] - p[k]);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (std::abs(sp - 1) > 1e-9 || std::abs(sq - 1) > 1e-9) throw std::invalid_argument("tv_distance: input not normalized");
    } else {
        if (sp != 1 || sq != 1) throw std::invalid_argument("tv_distance: input not normalized");
    }
    return d / 2;
}

inline Rational tv_distance(const std::vector<Rational>& p, const std::vector<Rational>& q) {
    return tv_distance<Rational>(std::span<const Rational>(p), std::span<const Rational>(q));
}

/// Finite joint law of a vector of discrete coordinates.
using JointDistribution = std::map<std::vector<Symbol>, Rational>;

struct IndependenceReport {
    Rational excess;   // d_TV(joint, product of marginals)
    bool independent;  // excess <= tolerance
};

inline IndependenceReport delta_independence(const JointDistribution& joint, const Rational& tolerance) {
    if (joint.empty()) throw std::invalid_argument("delta_independence: empty distribution");
    const std::size_t k = joint.begin()->first.size();
    Rational total = 0;
    std::vector<std::map<Symbol, Rational>> marginals(k);
    for (const auto& [x, p] : joint) {
        if (x.size() != k) throw std::invalid_argument("delta_independence: ragged outcomes");
        if (p < 0) throw std::invalid_argument("delta_independence: negative mass");
        total += p;
        for (std::size_t c = 0; c < k; ++c) marginals[c][x[c]] += p;
    }
    if (total != 1) throw std::invalid_argument("delta_independence: input not normalized");

    // Sum |joint - product| over the full product support.
    Rational dist = 0;
    std::vector<std::vector<std::pair<Symbol, Rational>>> axes(k);
    for (std::size_t c = 0; c < k; ++c)
        for (const auto& kv : marginals[c]) axes[c].push_back(kv);
    std::vector<std::size_t> idx(k, 0);
    while (true) {
        std::vector<Symbol> x(k);
        Rational prod = 1;
        for (std::size_t c = 0; c < k; ++c) {
            x[c] = axes[c][idx[c]].first;
            prod *= axes[c][idx[c]].second;
        }
        auto it = joint.find(x);
        Rational pj = it == joint.end() ? Rational(0) : it->second;
        dist += abs(pj - prod);
        std::size_t c = 0;
        while (c < k && ++idx[c] == axes[c].size()) idx[c++] = 0;
        if (c == k) break;
    }
    Rational excess = dist / 2;
    return IndependenceReport{excess, excess <= tolerance};
}

/// Law of the signal profile (S marginalized out).
inline JointDistribution profile_law(const JointTable& table) {
    JointDistribution d;
    for (const auto& e : table.entries) d[e.profile] += e.weight;
    return d;
}

/// Law of the signal profile conditioned on S = s.
inline JointDistribution profile_law_given(const JointTable& table, int s) {
    JointDistribution d;
    Rational mass = 0;
    for (const auto& e : table.entries)
        if (e.state == s) mass += e.weight;
    if (mass == 0) throw std::invalid_argument("profile_law_given: state has zero probability");
    for (const auto& e : table.entries)
        if (e.state == s) d[e.profile] += e.weight / mass;
    return d;
}

// ---------------------------------------------------------------------------------------
// MAP estimation from three conditionally independent bits

/// Lower-bound margin: (1/100)(2p - 1)(3p^2 - 2p^3 - p).
inline Rational three_bit_margin(const Rational& p) {
    return Rational(1, 100) * (2 * p - 1) * (3 * p * p - 2 * p * p * p - p);
}

struct ThreeBitMap {
    Rational accuracy;          // P(MAP(X) = S)
    std::array<int, 8> rule{};  // MAP estimate for x = x1 + 2 x2 + 4 x3
};

/// Bits with P(X_i = 1 | S = 1) = p + delta_i and P(X_i = 0 | S = 0) = p - delta_i.
/// Exact enumeration over the 8 outcomes; ties resolve to 1 (accuracy is unaffected).
inline ThreeBitMap map_accuracy_three_bits(const Rational& p, const std::array<Rational, 3>& delta) {
    if (p <= Rational(1, 2) || p >= 1) throw std::invalid_argument("map_accuracy_three_bits: p must lie in (1/2, 1)");
    std::array<Rational, 3> one_given_1, zero_given_0;
    for (int i = 0; i < 3; ++i) {
        one_given_1[i] = p + delta[i];
        zero_given_0[i] = p - delta[i];
        for (const Rational* c : {&one_given_1[i], &zero_given_0[i]})
            if (*c <= 0 || *c >= 1) throw std::invalid_argument("map_accuracy_three_bits: degenerate conditional probability");
    }
    ThreeBitMap out;
    out.accuracy = 0;
    for (int x = 0; x < 8; ++x) {
        Rational l1 = Rational(1, 2), l0 = Rational(1, 2);
        for (int i = 0; i < 3; ++i) {
            const bool bit = (x >> i) & 1;
            l1 *= bit ? one_given_1[i] : 1 - one_given_1[i];
            l0 *= bit ? 1 - zero_given_0[i] : zero_given_0[i];
        }
        out.rule[static_cast<std::size_t>(x)] = l1 >= l0 ? 1 : 0;
        out.accuracy += l1 >= l0 ? l1 : l0;
    }
    return out;
}

} // namespace opdyn
