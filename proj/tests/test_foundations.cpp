#include "opdyn/linalg.hpp"
#include "opdyn/montecarlo.hpp"
#include "opdyn/network.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/rng.hpp"
#include "opdyn/signals.hpp"
#include "opdyn/stats.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace opdyn;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

// Oracle: alpha read off the first row of P^(2^squarings), in floating point.
std::vector<Rational> stationary_by_matrix_power(const Network& net, int squarings) {
    const std::size_t n = net.size();
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (Agent i = 0; i < n; ++i)
        for (const auto& a : net.out(i)) p[i][a.target] += a.value;
    for (int s = 0; s < squarings; ++s) {
        std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) q[i][j] += p[i][k] * p[k][j];
        // Rounding in the row sums doubles with each squaring, so renormalize.
        for (auto& row : q) {
            double s = 0.0;
            for (double v : row) s += v;
            for (double& v : row) v /= s;
        }
        p = q;
    }
    std::vector<Rational> out;
    for (std::size_t j = 0; j < n; ++j) out.emplace_back(p[0][j]);
    return out;
}

} // namespace

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
    EXPECT_EQ(parse_rational("3/6"), R(1, 2));
    EXPECT_EQ(parse_rational("-4"), R(-4));
    EXPECT_EQ(parse_rational("0.125"), R(1, 8));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Rational, PowAndBinomial) {
    EXPECT_EQ(pow(R(2, 3), 3), R(8, 27));
    EXPECT_EQ(binomial(10, 5), Integer(252));
}

TEST(Linalg, SolveMatchesHandComputedSystem) {
    // x + y = 3, x - y = 1.
    const auto x = linalg::solve({{R(1), R(1)}, {R(1), R(-1)}}, {R(3), R(1)});
    EXPECT_EQ(x[0], R(2));
    EXPECT_EQ(x[1], R(1));
    EXPECT_THROW(linalg::solve({{R(1), R(1)}, {R(2), R(2)}}, {R(1), R(2)}), std::exception);
}

TEST(Linalg, MultimodularAgreesWithRationalElimination) {
    const linalg::RationalMatrix a{{R(3, 7), R(1, 5), R(2)}, {R(-1, 3), R(4), R(1, 9)}, {R(5), R(2, 11), R(-7, 2)}};
    const std::vector<Rational> b{R(1), R(-2, 3), R(5, 4)};
    const auto expect = linalg::solve(a, b);
    auto build = [&](std::uint64_t p) -> std::optional<linalg::ModularSystem> {
        linalg::ModularSystem sys;
        sys.dim = 3;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j <= 3; ++j) {
                auto v = linalg::rational_mod(j < 3 ? a[i][j] : b[i], p);
                if (!v) return std::nullopt;
                sys.augmented.push_back(*v);
            }
        }
        return sys;
    };
    auto verify = [&](const std::vector<Rational>& x) {
        for (std::size_t i = 0; i < 3; ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < 3; ++j) s += a[i][j] * x[j];
            if (s != b[i]) return false;
        }
        return true;
    };
    EXPECT_EQ(linalg::solve_multimodular(build, verify), expect);
}

TEST(Rng, StreamsAreDeterministicAndLaneSeparated) {
    Stream a(7, 3, 1), b(7, 3, 1), c(7, 3, 2);
    for (int k = 0; k < 10; ++k) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
    }
    Stream d(1, 1);
    for (int k = 0; k < 1000; ++k) EXPECT_LT(d.below(7), 7u);
}

TEST(MonteCarlo, CountsDoNotDependOnWorkerCount) {
    auto body = [](std::uint64_t t, Counters& acc) {
        Stream s(99, t);
        if (s.bernoulli(0.3)) ++acc[0];
        acc[1] += s.below(10);
    };
    const auto one = run_trials<Counters>(5000, body, 1);
    const auto four = run_trials<Counters>(5000, body, 4);
    EXPECT_EQ(one.values, four.values);
}

TEST(Stats, WilsonIntervalKnownValues) {
    const auto iv = wilson_interval(50, 100);
    EXPECT_NEAR(iv.low, 0.40383, 1e-4);
    EXPECT_NEAR(iv.high, 0.59617, 1e-4);
    const auto zero = wilson_interval(0, 10), all = wilson_interval(10, 10);
    EXPECT_TRUE(zero.contains(0.0));
    EXPECT_FALSE(zero.contains(1.0));
    EXPECT_NEAR(zero.low, 1.0 - all.high, 1e-12);
    EXPECT_NEAR(zero.high, 1.0 - all.low, 1e-12);
    EXPECT_THROW(wilson_interval(0, 0), std::invalid_argument);
    EXPECT_THROW(wilson_interval(3, 2), std::invalid_argument);
}

TEST(Network, GeneratorShapes) {
    EXPECT_EQ(chain(4).arc_count(), 4u + 6u);
    EXPECT_EQ(cycle(5).undirected_edge_count(), 5u);
    EXPECT_EQ(complete(4, Weighting::uniform).arc_count(), 12u);
    EXPECT_EQ(star(5).degree(0), 4u);
    EXPECT_EQ(grid(3, 3).degree(4), 4u);
    const auto k33 = generate(parse_graph_spec("bipartite:3x3+plain"));
    EXPECT_EQ(k33.size(), 6u);
    EXPECT_EQ(k33.undirected_edge_count(), 9u);
    EXPECT_TRUE(validate_odd_neighborhoods(k33).ok());
    const auto rr = generate(parse_graph_spec("random_regular:10:3:7"));
    for (Agent i = 0; i < 10; ++i) EXPECT_EQ(rr.degree(i), 3u);
    EXPECT_THROW(generate(parse_graph_spec("random_regular:5:3:1")), std::invalid_argument);
}

TEST(Network, RandomDirectedIsStronglyConnectedAndStochastic) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto net = generate({GraphKind::random_directed, 15, 2, 0, seed});
        EXPECT_TRUE(validate(net, true).ok()) << seed;
        EXPECT_TRUE(net.exact());
    }
}

TEST(Network, ValidationRejectsBadWeights) {
    Network net(2, true);
    net.add_arc(0, 1, R(1, 2));
    net.add_arc(1, 0, R(1));
    EXPECT_FALSE(validate(net, true).ok());
    EXPECT_THROW(require_valid(net, true), std::invalid_argument);
}

TEST(Network, FileRoundTrip) {
    const auto net = chain(3);
    std::stringstream ss;
    write_network(ss, net);
    const auto back = read_network(ss);
    ASSERT_EQ(back.size(), 3u);
    for (Agent i = 0; i < 3; ++i)
        for (Agent j = 0; j < 3; ++j) EXPECT_EQ(back.weight(i, j), net.weight(i, j));
}

TEST(Stationary, LazyPathMatchesFrozenValue) {
    const auto alpha = stationary_exact(chain(3));
    EXPECT_EQ(alpha, (std::vector<Rational>{R(2, 7), R(3, 7), R(2, 7)}));
}

TEST(Stationary, ExactSolveMatchesMatrixPowerOracle) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto net = generate({GraphKind::random_directed, 8, 2, 0, seed});
        const auto exact = stationary_exact(net);
        const auto approx = stationary_by_matrix_power(net, 40);
        for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_NEAR(to_double(exact[i]), to_double(approx[i]), 1e-10);
    }
}

TEST(Stationary, UndirectedLazyIsNeighborhoodProportional) {
    for (const auto& net : {star(6), grid(2, 3), cycle(7)}) EXPECT_EQ(stationary_exact(net), degree_proportional(net));
}

TEST(Mixing, TotalVariationDecaysToZero) {
    const auto net = cycle(9);
    MixingTracker tracker(net, stationary_distribution(net).alpha);
    double prev = tracker.max_tv();
    for (int t = 0; t < 200; ++t) {
        tracker.step();
        EXPECT_LE(tracker.max_tv(), prev + 1e-15);
        prev = tracker.max_tv();
    }
    EXPECT_LT(prev, 1e-6);
    EXPECT_NEAR(mixing_tv(net, 0, 50), [&] {
        MixingTracker t2(net, stationary_distribution(net).alpha);
        for (int k = 0; k < 50; ++k) t2.step();
        return t2.tv(0);
    }(), 1e-12);
}

TEST(Signals, BernoulliViewAndBeliefs) {
    const auto m = SignalModel::bernoulli(R(1, 6));
    const auto f = m.finite_view();
    EXPECT_EQ(f.mu1[1], R(2, 3));
    EXPECT_EQ(f.mu0[1], R(1, 3));
    EXPECT_EQ(*private_belief(m, 1).exact, R(2, 3));
    EXPECT_THROW(SignalModel::bernoulli(R(1, 2)), std::invalid_argument);
    EXPECT_THROW(SignalModel::finite({R(1, 2), R(1, 2)}, {R(1), R(0)}), std::invalid_argument);
}

TEST(Signals, InlineFiniteSpecParses) {
    const auto m = parse_signal_spec("finite:3:1/2,1/3,1/6;1/6,1/3,1/2");
    const auto f = m.finite_view();
    EXPECT_EQ(f.mu0, (std::vector<Rational>{R(1, 2), R(1, 3), R(1, 6)}));
    EXPECT_EQ(parse_signal_spec(m.describe()).finite_view().mu1, f.mu1);
}

TEST(Signals, CalibrationOfPrivateBelief) {
    const auto m = parse_signal_spec("finite:3:1/2,1/3,1/6;1/6,1/3,1/2");
    const auto f = m.finite_view();
    std::map<Rational, std::pair<Rational, Rational>> by_belief;  // belief -> (P(B = b), P(B = b, S = 1))
    for (Symbol x = 0; x < 3; ++x) {
        auto& slot = by_belief[*private_belief(m, x).exact];
        slot.first += (f.mu0[x] + f.mu1[x]) / 2;
        slot.second += f.mu1[x] / 2;
    }
    for (const auto& [b, s] : by_belief) EXPECT_EQ(s.second / s.first, b);
}

TEST(Signals, XorTableHasIndependentSignalsButDependentGivenState) {
    const auto t = xor_table();
    EXPECT_EQ(delta_independence(profile_law(t), R(0)).excess, R(0));
    EXPECT_EQ(delta_independence(profile_law_given(t, 1), R(0)).excess, R(1, 2));
}

TEST(Signals, SampleWorldIsDeterministic) {
    const auto m = SignalModel::bernoulli(R(1, 5));
    const auto a = sample_world(m, 12, 5, 9), b = sample_world(m, 12, 5, 9);
    EXPECT_EQ(a.state, b.state);
    EXPECT_EQ(a.symbols, b.symbols);
}

TEST(ThreeBits, MajorityCaseMatchesEnumerationOracle) {
    const Rational p = R(2, 3);
    const auto m = map_accuracy_three_bits(p, {R(0), R(0), R(0)});
    EXPECT_EQ(m.accuracy, R(20, 27));
    EXPECT_EQ(m.accuracy, p * p * p + 3 * p * p * (1 - p));
    for (int x = 0; x < 8; ++x) EXPECT_EQ(m.rule[x], __builtin_popcount(x) >= 2 ? 1 : 0);
}

TEST(ThreeBits, AccuracyBoundOnAsymmetricPoint) {
    const Rational p = R(7, 10);
    const auto m = map_accuracy_three_bits(p, {R(1, 10), R(-1, 5), R(1, 4)});
    EXPECT_GE(m.accuracy, p + three_bit_margin(p));
    EXPECT_THROW(map_accuracy_three_bits(p, {R(3, 10), R(0), R(0)}), std::invalid_argument);
}
