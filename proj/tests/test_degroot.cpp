#include "opdyn/degroot.hpp"

#include <gtest/gtest.h>

using namespace opdyn;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

// Oracle: direct sum over all 2^n signal vectors and both states.
std::pair<Rational, Rational> learning_by_enumeration(const Network& net, const Rational& delta) {
    const auto alpha = stationary_exact(net);
    const std::size_t n = net.size();
    const Rational q = R(1, 2) + delta;
    Rational success = 0, tie = 0;
    for (int s = 0; s < 2; ++s)
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
            Rational prob = R(1, 2), a = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const int bit = (x >> i) & 1u;
                prob *= bit == s ? q : 1 - q;
                if (bit) a += alpha[i];
            }
            if (a == R(1, 2)) tie += prob;
            else if ((a > R(1, 2) ? 1 : 0) == s) success += prob;
        }
    return {success, tie};
}

} // namespace

TEST(DegrootStep, LazyPathFrozenValue) {
    const auto next = degroot::step<Rational>(chain(3), std::vector<Rational>{R(0), R(1), R(0)});
    EXPECT_EQ(next, (std::vector<Rational>{R(1, 2), R(1, 3), R(1, 2)}));
}

TEST(DegrootStep, ConstantsAreFixedPoints) {
    const auto net = generate({GraphKind::random_directed, 9, 2, 0, 4});
    const auto next = degroot::step<Rational>(net, std::vector<Rational>(9, R(3, 8)));
    for (const auto& v : next) EXPECT_EQ(v, R(3, 8));
    const auto single = degroot::step(chain(1), std::vector<double>{0.25});
    EXPECT_DOUBLE_EQ(single[0], 0.25);
}

TEST(DegrootLimit, LazyPathSignalsGiveThreeSevenths) {
    EXPECT_EQ(degroot::limit_exact(chain(3), std::vector<Rational>{R(0), R(1), R(0)}), R(3, 7));
    EXPECT_EQ(degroot::limit_exact(chain(3), std::vector<Rational>(3, R(1))), R(1));
}

TEST(DegrootLimit, IterationConvergesToAlphaWeightedSignals) {
    const auto net = generate({GraphKind::random_directed, 20, 3, 0, 8});
    std::vector<double> signals(20);
    for (std::size_t i = 0; i < 20; ++i) signals[i] = (i * 7 % 5) / 4.0;
    const auto run = degroot::run_until_mixed(net, signals, 1e-10);
    ASSERT_TRUE(run.mixed);
    const double target = degroot::limit(net, signals);
    for (double a : run.actions) EXPECT_NEAR(a, target, 1e-9);
}

TEST(DegrootLearning, PolynomialMatchesEnumerationOracle) {
    const std::vector<Network> nets{chain(5), star(6), cycle(4), generate({GraphKind::random_directed, 7, 2, 0, 3})};
    for (const auto& net : nets)
        for (const auto& d : {R(0), R(1, 20), R(1, 5), R(9, 20)}) {
            const auto [success, tie] = learning_by_enumeration(net, d);
            const auto e = degroot::learning_probability_exact(net, d);
            EXPECT_EQ(e.success, success);
            EXPECT_EQ(e.tie, tie);
        }
}

TEST(DegrootLearning, CompleteFiveFrozenValue) {
    const auto e = degroot::learning_probability_exact(complete(5), R(3, 10));
    EXPECT_EQ(e.success, R(2944, 3125));
    EXPECT_EQ(e.tie, R(0));
}

TEST(DegrootLearning, EndpointsOfDelta) {
    const auto poly = degroot::learning_polynomial(chain(5));
    EXPECT_EQ(poly.success(R(1, 2)), R(1));
    EXPECT_EQ(poly.success(R(0)) + poly.tie(R(0)) / 2, R(1, 2));
}

TEST(DegrootLearning, EvenCycleHasTieMass) {
    const auto e = degroot::learning_probability_exact(cycle(4), R(1, 10));
    EXPECT_GT(e.tie, 0);
}

TEST(DegrootLearning, MonteCarloAgreesWithExact) {
    const auto net = star(7);
    const auto exact = degroot::learning_probability_exact(net, R(1, 10));
    const auto mc = degroot::learning_probability_mc(net, R(1, 10), 40000, 17);
    EXPECT_TRUE(mc.mc_success.within_half_widths(to_double(exact.success), 3));
}

TEST(Hoeffding, PointMassBoundBelowExact) {
    const std::vector<double> alpha{1.0};
    const double bound = degroot::hoeffding_success_bound(alpha, 0.2);
    EXPECT_NEAR(bound, 1.0 - std::exp(-2.0 * 0.04), 1e-15);
    EXPECT_LE(bound, 0.7);
}

TEST(Hoeffding, UniformLargeNetTendsToOne) {
    const std::vector<double> alpha(400, 1.0 / 400);
    EXPECT_GT(degroot::hoeffding_success_bound(alpha, 0.2), 0.99999);
}

TEST(Cheaters, SingleCheaterPullsEveryone) {
    const auto net = cycle(6);
    const auto exact = degroot::cheater_limits_exact(net, {{2, R(1, 3)}});
    for (const auto& v : exact) EXPECT_EQ(v, R(1, 3));
    const auto run = degroot::run_with_cheaters(net, {0, 1, 0, 1, 0, 1}, {{2, 1.0 / 3}}, 100000, 1e-14);
    ASSERT_TRUE(run.converged);
    for (double v : run.actions) EXPECT_NEAR(v, 1.0 / 3, 1e-10);
}

TEST(Cheaters, OppositeEndsOfLazyPath) {
    const auto limits = degroot::cheater_limits_exact(chain(5), {{0, R(0)}, {4, R(1)}});
    EXPECT_EQ(limits, (std::vector<Rational>{R(0), R(1, 4), R(1, 2), R(3, 4), R(1)}));
    const auto run = degroot::run_with_cheaters(chain(5), {0.3, 0.9, 0.1, 0.5, 0.7}, {{0, 0.0}, {4, 1.0}}, 100000, 1e-14);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(run.actions[i], to_double(limits[i]), 1e-10);
}

TEST(Cheaters, RejectsAllCheaters) {
    EXPECT_THROW(degroot::cheater_limits_exact(chain(2), {{0, R(0)}, {1, R(1)}}), std::invalid_argument);
}
