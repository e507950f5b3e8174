#include "opdyn/voter.hpp"

#include <gtest/gtest.h>

using namespace opdyn;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

voter::State state_of(std::uint64_t x, std::size_t n) {
    voter::State s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (x >> i) & 1u;
    return s;
}

} // namespace

TEST(VoterTransition, TwoNodeLazyGraphFrozenValue) {
    const auto row = voter::transition_row(chain(2), {1, 0});
    ASSERT_EQ(row.size(), 4u);
    for (const auto& p : row) EXPECT_EQ(p, R(1, 4));
}

TEST(VoterTransition, RowsAreDistributions) {
    const auto net = star(4);
    for (std::uint64_t x = 0; x < 16; ++x) {
        Rational total = 0;
        for (const auto& p : voter::transition_row(net, state_of(x, 4))) total += p;
        EXPECT_EQ(total, R(1));
    }
}

TEST(VoterAbsorption, LazyPathFrozenValues) {
    const auto net = chain(3);
    EXPECT_EQ(voter::exact_consensus_probability(net, {1, 0, 0}), R(2, 7));
    EXPECT_EQ(voter::exact_consensus_probability(net, {0, 1, 0}), R(3, 7));
    EXPECT_EQ(voter::exact_consensus_probability(net, {1, 0, 1}), R(4, 7));
    EXPECT_EQ(voter::exact_consensus_probability(net, {1, 1, 1}), R(1));
}

TEST(VoterAbsorption, EqualsAlphaWeightedSignalsOnStar) {
    const auto net = star(6);
    const auto h = voter::absorption_probabilities(net);
    const auto alpha = stationary_exact(net);
    for (std::uint64_t x = 0; x < h.size(); ++x) {
        Rational w = 0;
        for (std::size_t i = 0; i < 6; ++i)
            if ((x >> i) & 1u) w += alpha[i];
        EXPECT_EQ(h[x], w);
    }
}

TEST(VoterAbsorption, MonteCarloMatchesExact) {
    const auto net = cycle(5);
    const voter::State start{1, 1, 0, 0, 0};
    const double target = to_double(voter::exact_consensus_probability(net, start));
    std::uint64_t ones = 0;
    const std::uint64_t trials = 20000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Stream rng(3, t);
        const auto run = voter::run_to_consensus(net, start, rng);
        ASSERT_TRUE(run.value);
        ones += *run.value;
    }
    EXPECT_TRUE((Proportion{ones, trials}).within_half_widths(target, 3));
}

TEST(VoterMartingale, DegreeWeightedSumIsMartingale) {
    for (const auto& net : {cycle(5), star(5), grid(2, 3)})
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << net.size()); ++x)
            EXPECT_EQ(voter::martingale_residual(net, state_of(x, net.size())), R(0));
}

TEST(VoterLearning, AbsorptionTimeWithinBound) {
    const auto t = voter::absorption_time_mc(cycle(8), 2000, 5);
    EXPECT_EQ(t.timeouts, 0u);
    EXPECT_LE(t.mean, t.bound);
    EXPECT_DOUBLE_EQ(t.bound, 2.0 * 2 * 64);
}

TEST(StrongVoter, ExchangeRules) {
    Stream rng(1, 1);
    voter::StrongAgent a{1, 1}, b{0, 1};
    voter::strong_exchange(a, b, rng);
    EXPECT_EQ(a.strong + b.strong, 0);  // two strong disagreeing agents both weaken
    voter::StrongAgent c{1, 1}, d{0, 0};
    voter::strong_exchange(c, d, rng);
    EXPECT_EQ(c.opinion, 1);
    EXPECT_EQ(d.opinion, 1);  // strong wins over weak
    EXPECT_EQ(c.strong + d.strong, 1);
}

TEST(StrongVoter, ReachesStrictSignalMajority) {
    const auto net = grid(3, 3);
    for (std::uint64_t t = 0; t < 500; ++t) {
        Stream rng(9, t);
        voter::State s(9);
        std::size_t ones = 0;
        for (auto& v : s) ones += (v = rng.bernoulli(0.5));
        const auto run = voter::run_strong_voter(net, s, rng, 10'000'000);
        ASSERT_TRUE(run.value);
        EXPECT_EQ(*run.value, ones * 2 > 9 ? 1 : 0);
        EXPECT_TRUE(run.strong_monotone);
    }
}
