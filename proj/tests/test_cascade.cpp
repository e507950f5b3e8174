#include "opdyn/cascade.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace opdyn;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

// Oracle: agent i picks 1 iff P(S=1, history, x) >= P(S=0, history, x), where the history
// weights are recomputed by enumerating every signal prefix of the earlier agents.
class HistoryOracle {
public:
    HistoryOracle(std::vector<Rational> mu0, std::vector<Rational> mu1) : mu0_(std::move(mu0)), mu1_(std::move(mu1)) {}

    std::vector<int> actions(const std::vector<std::size_t>& signals) {
        std::vector<int> h;
        for (std::size_t x : signals) h.push_back(decide(h, x));
        return h;
    }

    // P(A_i = S) for i = 1..n.
    std::vector<Rational> correct(std::size_t n) {
        std::vector<Rational> out(n, Rational(0));
        const std::size_t k = mu0_.size();
        std::vector<std::size_t> y(n, 0);
        for (;;) {
            const auto h = actions(y);
            Rational w0 = R(1, 2), w1 = R(1, 2);
            for (std::size_t x : y) {
                w0 *= mu0_[x];
                w1 *= mu1_[x];
            }
            for (std::size_t i = 0; i < n; ++i) out[i] += h[i] ? w1 : w0;
            std::size_t j = 0;
            while (j < n && ++y[j] == k) y[j++] = 0;
            if (j == n) break;
        }
        return out;
    }

private:
    int decide(const std::vector<int>& history, std::size_t x) {
        const auto [w0, w1] = history_weight(history);
        return w1 * mu1_[x] >= w0 * mu0_[x] ? 1 : 0;
    }

    std::pair<Rational, Rational> history_weight(const std::vector<int>& history) {
        if (auto it = memo_.find(history); it != memo_.end()) return it->second;
        Rational w0 = 0, w1 = 0;
        const std::size_t m = history.size(), k = mu0_.size();
        std::vector<std::size_t> y(m, 0);
        for (;;) {
            if (actions(y) == history) {
                Rational p0 = 1, p1 = 1;
                for (std::size_t x : y) {
                    p0 *= mu0_[x];
                    p1 *= mu1_[x];
                }
                w0 += p0;
                w1 += p1;
            }
            std::size_t j = 0;
            while (j < m && ++y[j] == k) y[j++] = 0;
            if (j == m) break;
        }
        return memo_[history] = {w0, w1};
    }

    std::vector<Rational> mu0_, mu1_;
    std::map<std::vector<int>, std::pair<Rational, Rational>> memo_;
};

} // namespace

TEST(CascadeDecision, IndifferenceGoesToOne) {
    EXPECT_EQ(cascade::agent_decision(R(1), R(1)), 1);
    EXPECT_EQ(cascade::agent_decision(R(2), R(1, 2)), 1);
    EXPECT_EQ(cascade::agent_decision(R(2), R(2, 3)), 0);
    EXPECT_THROW(cascade::agent_decision(R(0), R(1)), std::invalid_argument);
}

TEST(CascadeObserver, BernoulliUpdates) {
    const auto model = SignalModel::bernoulli(R(1, 6));
    EXPECT_EQ(cascade::observer_update(R(1), 1, model), R(1, 2));
    EXPECT_EQ(cascade::observer_update(R(1), 0, model), R(2));
    EXPECT_TRUE(cascade::detect_cascade(R(1, 2), model));
    EXPECT_EQ(cascade::observer_update(R(1, 2), 1, model), R(1, 2));
    EXPECT_FALSE(cascade::detect_cascade(R(2), model));
    EXPECT_EQ(cascade::observer_update(R(2), 1, model), R(1));
    EXPECT_THROW(cascade::observer_update(R(1, 2), 0, model), std::domain_error);
}

TEST(CascadeExact, FrozenAccuracies) {
    const auto ex = cascade::run_sequence_exact(SignalModel::bernoulli(R(1, 6)), 5);
    EXPECT_EQ(ex.correct, (std::vector<Rational>{R(2, 3), R(2, 3), R(19, 27), R(19, 27), R(173, 243)}));
    EXPECT_TRUE(ex.observer_copies);
    EXPECT_TRUE(ex.constant_after_onset);
}

TEST(CascadeExact, PlateauAtSixteen) {
    const auto ex = cascade::run_sequence_exact(SignalModel::bernoulli(R(1, 6)), 16);
    EXPECT_EQ(ex.correct.back(), R(10249201, 14348907));
}

TEST(CascadeExact, MatchesHistoryOracle) {
    const std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>> models{
        {{R(2, 3), R(1, 3)}, {R(1, 3), R(2, 3)}},
        {{R(1, 2), R(1, 3), R(1, 6)}, {R(1, 6), R(1, 3), R(1, 2)}},
        {{R(3, 5), R(2, 5)}, {R(1, 4), R(3, 4)}},
    };
    for (const auto& [mu0, mu1] : models) {
        const std::size_t n = mu0.size() == 2 ? 8 : 6;
        HistoryOracle oracle(mu0, mu1);
        const auto ex = cascade::run_sequence_exact(SignalModel::finite(mu0, mu1), n);
        EXPECT_EQ(ex.correct, oracle.correct(n));
        EXPECT_EQ(cascade::observer_tree(SignalModel::finite(mu0, mu1), n).correct, ex.correct);
    }
}

TEST(CascadeExact, AccuracyNeverDrops) {
    const auto ex = cascade::run_sequence_exact(SignalModel::bernoulli(R(1, 10)), 12);
    for (std::size_t i = 1; i < ex.correct.size(); ++i) EXPECT_GE(ex.correct[i], ex.correct[i - 1]);
}

TEST(CascadeMonteCarlo, AgreesWithExact) {
    const auto model = SignalModel::bernoulli(R(1, 6));
    const auto ex = cascade::run_sequence_exact(model, 6);
    const auto mc = cascade::run_sequence_mc(model, 6, 30000, 13);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_TRUE(mc.correct[i].within_half_widths(to_double(ex.correct[i]), 3));
}

TEST(CascadeGaussian, ObserverCopiesPreviousAgent) {
    const std::vector<double> signals{0.3, -1.2, 0.8, 2.5, -0.1, 0.4};
    const auto run = cascade::play_gaussian(1, signals, 1.0);
    EXPECT_TRUE(run.observer_copies());
    EXPECT_FALSE(run.onset);
    EXPECT_EQ(run.actions.front(), 1);
}
