#include "opdyn/bayes.hpp"

#include <gtest/gtest.h>

using namespace opdyn;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

// Oracle: P(majority of k independent signals is wrong), signals correct with probability q.
Rational majority_wrong(std::size_t k, const Rational& q) {
    Rational total = 0;
    for (std::size_t wrong = k / 2 + 1; wrong <= k; ++wrong)
        total += Rational(binomial(k, wrong)) * pow(1 - q, static_cast<unsigned>(wrong)) *
                 pow(q, static_cast<unsigned>(k - wrong));
    return total;
}

// Oracle: P(two adjacent agents on a path both hold a wrong signal), by enumerating bit strings.
Rational adjacent_wrong(std::size_t n, const Rational& q) {
    Rational total = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        if (!(x & (x >> 1))) continue;
        const auto wrong = static_cast<unsigned>(std::popcount(x));
        total += pow(1 - q, wrong) * pow(q, static_cast<unsigned>(n) - wrong);
    }
    return total;
}

} // namespace

TEST(ProfileSpace, BernoulliWeights) {
    const auto space = bayes::build_profile_space(SignalModel::bernoulli(R(1, 6)), 3);
    ASSERT_EQ(space.size(), 8u);
    space.validate();
    for (const auto& p : space.profiles) {
        unsigned ones = 0;
        for (auto s : p.signals) ones += s == 1;
        EXPECT_EQ(p.w1, R(1, 2) * pow(R(2, 3), ones) * pow(R(1, 3), 3 - ones));
        EXPECT_EQ(p.w0, R(1, 2) * pow(R(1, 3), ones) * pow(R(2, 3), 3 - ones));
    }
}

TEST(BayesEngine, LoneAgentKeepsPrivatePosterior) {
    const auto space = bayes::build_profile_space(SignalModel::bernoulli(R(1, 6)), 1);
    const auto traj = bayes::run_exact(chain(1), space, 5, bayes::Utility::continuous);
    EXPECT_TRUE(traj.stable);
    for (std::size_t p = 0; p < space.size(); ++p)
        EXPECT_EQ(traj.belief(0, 3, p), space.profiles[p].signals[0] ? R(2, 3) : R(1, 3));
}

TEST(BayesEngine, ContinuousUtilityReachesAgreementAndFullInformation) {
    const auto space = bayes::build_profile_space(SignalModel::bernoulli(R(1, 6)), 3);
    const auto net = chain(3);
    const auto traj = bayes::run_exact(net, space, 40, bayes::Utility::continuous);
    ASSERT_TRUE(traj.stable);
    EXPECT_TRUE(bayes::agreement_check(traj, space).beliefs_agree);
    EXPECT_EQ(bayes::full_information_check(traj, space).mismatches, 0u);
    const auto filt = bayes::filtration_check(traj, space);
    EXPECT_TRUE(filt.refinement);
    EXPECT_TRUE(filt.tower);
    EXPECT_TRUE(filt.calibration);
    EXPECT_LE(bayes::fixation_stats(traj, space).max_fixation, space.size() * 3);
}

TEST(BayesEngine, ActionsDependOnlyOnTheBall) {
    const auto space = bayes::build_profile_space(SignalModel::bernoulli(R(1, 6)), 5);
    const auto net = chain(5);
    const auto traj = bayes::run_exact(net, space, 8, bayes::Utility::discrete);
    for (std::size_t t = 0; t < 4; ++t) EXPECT_TRUE(bayes::locality_check(net, space, traj, 0, t).ok());
}

TEST(BayesEngine, XorSignalsStayUninformative) {
    const auto space = bayes::build_profile_space(xor_table());
    EXPECT_FALSE(space.conditionally_independent);
    const auto traj = bayes::run_exact(complete(2), space, 10, bayes::Utility::continuous);
    ASSERT_TRUE(traj.stable);
    EXPECT_TRUE(bayes::agreement_check(traj, space).beliefs_agree);
    EXPECT_EQ(bayes::full_information_check(traj, space).mismatches, space.size());
    for (std::size_t p = 0; p < space.size(); ++p) EXPECT_EQ(traj.belief(0, traj.last(), p), R(1, 2));
}

TEST(BayesEngine, DiscreteTieRules) {
    EXPECT_EQ(bayes::detail::discrete_action(R(1, 2), R(1, 3), bayes::TieRule::choose_one), R(1));
    EXPECT_EQ(bayes::detail::discrete_action(R(1, 2), R(1, 3), bayes::TieRule::own_signal), R(0));
    EXPECT_EQ(bayes::detail::discrete_action(R(3, 5), R(1, 3), bayes::TieRule::own_signal), R(1));
}

TEST(Senate, ErrorMatchesBinomialOracle) {
    for (std::size_t n : {7u, 10u}) {
        const auto res = bayes::senate_scenario(n, 5, R(1, 6));
        EXPECT_EQ(res.senate_error, majority_wrong(5, R(2, 3)));
        EXPECT_EQ(res.senate_error, R(17, 81));
        EXPECT_TRUE(res.actions_agree);
        EXPECT_GT(res.min_margin, 0);
    }
}

TEST(Senate, RejectsEvenSenate) {
    EXPECT_THROW(bayes::senate_scenario(10, 4, R(1, 6)), std::invalid_argument);
}

TEST(ChainTie, FrozenValuesAndPairOracle) {
    const auto res = bayes::chain_tie_to_self(4, R(1, 6), 4 * 16 + 1);
    ASSERT_TRUE(res.stable);
    EXPECT_TRUE(res.claim_holds);
    EXPECT_EQ(res.some_agent_wrong, R(29, 81));
    EXPECT_EQ(res.adjacent_wrong_pair, R(7, 27));
    EXPECT_EQ(res.adjacent_wrong_pair, adjacent_wrong(4, R(2, 3)));
    EXPECT_GE(res.some_agent_wrong, res.adjacent_wrong_pair);
}

TEST(ChainTie, SixAgentPairOracle) {
    const auto res = bayes::chain_tie_to_self(6, R(1, 6), 6 * 64 + 1);
    EXPECT_EQ(res.adjacent_wrong_pair, adjacent_wrong(6, R(2, 3)));
    EXPECT_EQ(res.some_agent_wrong, R(11, 27));
}
