#include "opdyn/opdyn.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace opdyn;
using namespace opdyn::harness;

namespace {

std::string error_of(const auto& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

std::string serialized(const ExperimentConfig& c) { return to_json(run_experiment(c), false).dump(); }

} // namespace

TEST(Config, JsonRoundTrip) {
    for (const auto& name : registry_names()) {
        const auto c = registry(name);
        EXPECT_EQ(config_from_json(json::parse(to_json(c).dump())), c) << name;
    }
}

TEST(Config, ErrorsNameTheField) {
    EXPECT_NE(error_of([] { config_from_json(json{{"family", "voter"}, {"colour", 3}}); }).find("'colour'"), std::string::npos);
    EXPECT_NE(error_of([] { config_from_json(json{{"family", "voter"}, {"trials", "many"}}); }).find("'trials'"), std::string::npos);
    EXPECT_NE(error_of([] { config_from_json(json{{"family", "flocking"}}); }).find("'family'"), std::string::npos);
    EXPECT_NE(error_of([] { config_from_json(json{{"family", "voter"}, {"mode", "mc"}}); }).find("'trials'"), std::string::npos);
    EXPECT_NE(error_of([] { config_from_json(json{{"family", "voter"}, {"schema_version", 7}}); }).find("'schema_version'"),
              std::string::npos);
}

TEST(Registry, UnknownNameListsAvailable) {
    const auto msg = error_of([] { registry("no-such-thing"); });
    EXPECT_NE(msg.find("no-such-thing"), std::string::npos);
    EXPECT_NE(msg.find("voter-eq1"), std::string::npos);
    EXPECT_NE(msg.find("cascade-bounded"), std::string::npos);
}

TEST(Registry, EveryCriterionNamesKnownExperiments) {
    const auto names = registry_names();
    ASSERT_EQ(criteria().size(), 16u);
    for (const auto& c : criteria())
        for (const auto& e : c.experiments) EXPECT_NE(std::find(names.begin(), names.end(), e), names.end()) << e;
}

TEST(Run, VoterExactEmbedsAbsorptionValues) {
    ExperimentConfig c;
    c.family = "voter";
    c.graph = "chain:3";
    c.signal = "bernoulli:1/4";
    const auto r = run_experiment(c);
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.intervals.empty());
    const auto& h = r.series.at("absorption");
    EXPECT_EQ(h.at("100"), "2/7");
    EXPECT_EQ(h.at("010"), "3/7");
    EXPECT_EQ(h.at("101"), "4/7");
    EXPECT_EQ(r.series.at("alpha_exact"), json::parse(R"(["2/7","3/7","2/7"])"));
    ASSERT_TRUE(r.exact.count("p_correct"));
}

TEST(Run, ReproducibleAcrossRunsAndWorkerCounts) {
    ExperimentConfig c;
    c.family = "degroot";
    c.graph = "star:9";
    c.signal = "bernoulli:1/10";
    c.mode = "mc";
    c.trials = 5000;
    c.seed = 77;
    const auto first = serialized(c);
    EXPECT_EQ(serialized(c), first);
    const char* saved = std::getenv("OPDYN_WORKERS");
    const std::string restore = saved ? saved : "";
    for (const char* w : {"1", "3"}) {
        setenv("OPDYN_WORKERS", w, 1);
        EXPECT_EQ(serialized(c), first) << "workers " << w;
    }
    if (saved) setenv("OPDYN_WORKERS", restore.c_str(), 1);
    else unsetenv("OPDYN_WORKERS");
    c.seed = 78;
    EXPECT_NE(serialized(c), first);
}

TEST(Run, MonteCarloRecordsIntervals) {
    ExperimentConfig c;
    c.family = "voter";
    c.graph = "cycle:6";
    c.signal = "bernoulli:1/5";
    c.mode = "mc";
    c.trials = 2000;
    const auto r = run_experiment(c);
    ASSERT_TRUE(r.intervals.count("p_correct"));
    EXPECT_LE(r.intervals.at("p_correct").low, r.estimates.at("p_correct"));
    EXPECT_GE(r.intervals.at("p_correct").high, r.estimates.at("p_correct"));
}

TEST(Run, DegrootCheatersOption) {
    ExperimentConfig c;
    c.family = "degroot";
    c.graph = "chain:5";
    c.signal = "bernoulli:1/4";
    c.options["cheaters"] = json{{"0", "0"}, {"4", "1"}};
    const auto r = run_experiment(c);
    EXPECT_TRUE(r.passed());
}

TEST(Run, UnknownScenarioIsRejected) {
    ExperimentConfig c;
    c.family = "bayes";
    c.scenario = "not-a-scenario";
    EXPECT_NE(error_of([&] { run_experiment(c); }).find("'scenario'"), std::string::npos);
}

TEST(Output, CsvRowsPerAgentAndRound) {
    ExperimentConfig c;
    c.family = "degroot";
    c.graph = "chain:3";
    c.signal = "bernoulli:1/4";
    c.horizon = 2;
    const auto out = run_experiment_full(c);
    ASSERT_EQ(out.trajectory.rounds.size(), 3u);
    std::ostringstream os;
    write_csv(os, out.trajectory);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "round,agent,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 9u);
}

TEST(Output, JsonKeysAreSorted) {
    ExperimentConfig c;
    c.family = "cascade";
    c.signal = "bernoulli:1/6";
    c.options["n"] = 5;
    const auto j = to_json(run_experiment(c));
    std::string prev;
    for (const auto& [k, v] : j.items()) {
        EXPECT_LT(prev, k);
        prev = k;
    }
    EXPECT_TRUE(j.contains("runtime_seconds"));
    EXPECT_FALSE(to_json(run_experiment(c), false).contains("runtime_seconds"));
}
