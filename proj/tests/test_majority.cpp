#include "opdyn/majority.hpp"

#include <gtest/gtest.h>

using namespace opdyn;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

// Oracle: L_t - L_{t-1} and J_t straight from an adjacency matrix, no Network iteration.
std::pair<long, long> lyapunov_step_by_matrix(const std::vector<std::vector<int>>& adj, const majority::Config& prev,
                                              const majority::Config& cur, const majority::Config& next) {
    long l_now = 0, l_before = 0, j = 0;
    for (std::size_t i = 0; i < adj.size(); ++i)
        for (std::size_t k = 0; k < adj.size(); ++k) {
            if (!adj[i][k]) continue;
            l_now += (next[i] - cur[k]) * (next[i] - cur[k]);
            l_before += (cur[i] - prev[k]) * (cur[i] - prev[k]);
            j += (next[i] - prev[i]) * cur[k];
        }
    return {l_now - l_before, j};
}

} // namespace

TEST(MajorityStep, CycleFiveFrozenTrajectory) {
    const auto net = cycle(5);
    const majority::Config a0{1, -1, 1, -1, -1};
    const auto a1 = majority::step(net, a0);
    EXPECT_EQ(a1, (majority::Config{-1, 1, -1, -1, -1}));
    EXPECT_EQ(majority::step(net, a1), majority::Config(5, -1));
}

TEST(MajorityStep, RejectsEvenNeighborhoods) {
    const auto net = cycle(4, Weighting::uniform);
    EXPECT_THROW(majority::require_majority_network(net), std::invalid_argument);
    EXPECT_THROW(majority::step(net, majority::Config{1, 1, -1, -1}), std::domain_error);
}

TEST(MajorityCycle, PlainEdgeOscillates) {
    const auto lc = majority::run_to_cycle(complete(2, Weighting::uniform), {1, -1});
    EXPECT_EQ(lc.period, 2u);
    EXPECT_EQ(lc.entry_time, 0u);
}

TEST(MajorityLyapunov, DoubledIdentityOnAllConfigs) {
    for (const auto& net : {cycle(6), complete(5), star(6, Weighting::uniform)}) {
        const std::size_t n = net.size();
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            const auto audit = majority::audit_trajectory(net, majority::decode(x, n));
            EXPECT_TRUE(audit.doubled_identity_holds);
            EXPECT_TRUE(audit.j_nonnegative);
            EXPECT_TRUE(audit.l_nonincreasing);
            EXPECT_TRUE(audit.j_zero_iff_period_two);
            EXPECT_LE(audit.entry_time, net.arc_count());
        }
    }
}

TEST(MajorityLyapunov, MatrixOracleGivesDoubledIdentity) {
    const std::size_t n = 7;
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) adj[i][i] = adj[i][(i + 1) % n] = adj[i][(i + n - 1) % n] = 1;
    const auto net = cycle(n);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const auto a0 = majority::decode(x, n);
        const auto a1 = majority::step(net, a0);
        const auto a2 = majority::step(net, a1);
        const auto [dl, j] = lyapunov_step_by_matrix(adj, a0, a1, a2);
        EXPECT_EQ(dl, -2 * j);
        EXPECT_EQ(majority::lyapunov(net, a1, a2) - majority::lyapunov(net, a0, a1), dl);
        EXPECT_EQ(majority::j_functional(net, a0, a1, a2), j);
    }
}

TEST(Retention, CycleFiveFrozenValue) {
    EXPECT_EQ(majority::retention_exact(cycle(5), R(3, 10)).error, R(181, 3125));
}

TEST(Retention, NoInformationAtZeroDelta) {
    EXPECT_EQ(majority::retention_exact(cycle(5), R(0)).error, R(1, 2));
}

TEST(Retention, MonteCarloMajorityNotBetterThanMap) {
    const auto net = cycle(7);
    const auto exact = majority::retention_exact(net, R(1, 5));
    const auto mc = majority::retention_mc(net, R(1, 5), 40000, 3);
    EXPECT_GE(mc.interval().high, to_double(exact.error));
}

TEST(BooleanFunctions, ThreeBitMajorityInfluences) {
    const auto maj = majority::truth_table(
        [](const majority::Config& x) -> majority::Spin { return x[0] + x[1] + x[2] > 0 ? 1 : -1; }, 3);
    EXPECT_TRUE(majority::is_odd(maj));
    EXPECT_TRUE(majority::is_monotone(maj));
    for (const auto& d : {R(0), R(1, 10), R(1, 4)}) {
        const Rational q = R(1, 2) + d;
        EXPECT_EQ(majority::influence(maj, 0, d), 2 * q * (1 - q));
        EXPECT_EQ(majority::total_influence(maj, d), majority::positive_probability_derivative(maj, d));
        EXPECT_EQ(majority::positive_probability(maj, d), 3 * q * q - 2 * q * q * q);
    }
}

TEST(BooleanFunctions, DictatorAndNonMonotone) {
    const auto dictator = majority::truth_table([](const majority::Config& x) { return x[1]; }, 3);
    EXPECT_EQ(majority::total_influence(dictator, R(1, 5)), R(1));
    const auto parity = majority::truth_table(
        [](const majority::Config& x) -> majority::Spin { return static_cast<majority::Spin>(x[0] * x[1]); }, 2);
    EXPECT_FALSE(majority::is_monotone(parity));
}

TEST(BooleanFunctions, InfluenceMonteCarlo) {
    const auto f = majority::limit_majority_function(cycle(5));
    const double exact = to_double(majority::influence(f, 2, R(1, 10)));
    EXPECT_TRUE(majority::influence_mc(f, 2, 0.1, 40000, 9).within_half_widths(exact, 3));
}

TEST(BooleanFunctions, CycleSevenRussoResidual) {
    const auto f = majority::limit_majority_function(cycle(7));
    EXPECT_TRUE(majority::is_odd(f));
    EXPECT_TRUE(majority::is_monotone(f));
    EXPECT_LE(majority::russo_residual(f, R(1, 5), 1e-4), 1e-6);
}
