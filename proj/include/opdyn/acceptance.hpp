#pragma once

// Acceptance suite: each criterion runs one or more registry experiments under a time budget.

#include "opdyn/experiments.hpp"

#include <ostream>

namespace opdyn::harness {

struct Criterion {
    int number;
    std::string title;
    std::vector<std::string> experiments;
    double budget_seconds;
};

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> c{
        {1, "DeGroot limit on random strongly connected nets", {"degroot-limit"}, 10},
        {2, "DeGroot learning probability monotone in delta", {"degroot-monotone"}, 60},
        {3, "voter absorption equals alpha-weighted signals", {"voter-eq1"}, 60},
        {4, "voter learning probability equals 1/2 + delta", {"voter-learning"}, 60},
        {5, "voter absorption time within 2dn^2", {"voter-absorption"}, 60},
        {6, "strong voter reaches the signal majority", {"strong-voter-majority"}, 60},
        {7, "majority dynamics period two and Lyapunov identity", {"majority-period2"}, 120},
        {8, "Russo formula", {"majority-russo"}, 60},
        {9, "three-bit MAP accuracy bound", {"three-bit-map"}, 10},
        {10, "Bayesian fixation within M n rounds", {"bayes-geanakoplos"}, 120},
        {11, "Bayesian agreement and full learning, XOR non-learning", {"bayes-agreement", "bayes-xor"}, 120},
        {12, "discrete-utility agreement", {"bayes-discrete-agreement"}, 120},
        {13, "senate example", {"senate"}, 60},
        {14, "non-learning chain with tie to own signal", {"chain-tie"}, 120},
        {15, "cascades: bounded plateau vs unbounded learning", {"cascade-bounded", "cascade-unbounded"}, 120},
        {16, "retention of information on cycles", {"retention-cycle"}, 300},
    };
    return c;
}

struct CriterionResult {
    const Criterion* criterion = nullptr;
    std::vector<ResultRecord> records;
    double runtime_seconds = 0.0;
    std::string error;
    bool within_budget() const { return runtime_seconds < criterion->budget_seconds; }
    bool passed() const {
        if (!error.empty() || !within_budget()) return false;
        for (const auto& r : records)
            if (!r.passed()) return false;
        return true;
    }
    std::string summary() const {
        std::vector<std::string> failed;
        if (!error.empty()) failed.push_back("error: " + error);
        for (const auto& r : records)
            for (const auto& [name, a] : r.assertions)
                if (!a.passed) failed.push_back(r.config.scenario + "/" + name + (a.detail.empty() ? "" : " (" + a.detail + ")"));
        if (!within_budget()) failed.push_back("over budget");
        return join(failed, "; ");
    }
};

inline CriterionResult run_criterion(const Criterion& c) {
    CriterionResult res;
    res.criterion = &c;
    Stopwatch clock;
    try {
        for (const auto& name : c.experiments) res.records.push_back(run_experiment(registry(name)));
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    res.runtime_seconds = clock.seconds();
    return res;
}

/// Resolves a criterion by number ("7") or by one of its registry names.
inline const Criterion& find_criterion(const std::string& key) {
    for (const auto& c : criteria()) {
        if (std::to_string(c.number) == key) return c;
        for (const auto& e : c.experiments)
            if (e == key) return c;
    }
    throw std::out_of_range("unknown criterion '" + key + "'; use 1-16 or one of: " + join(registry_names()));
}

inline void print_line(std::ostream& os, const CriterionResult& r) {
    os << (r.passed() ? "PASS" : "FAIL") << "  [" << r.criterion->number << "] " << r.criterion->title << "  ("
       << fmt(r.runtime_seconds) << " s / " << r.criterion->budget_seconds << " s)";
    if (!r.passed()) os << "  " << r.summary();
    os << '\n';
}

} // namespace opdyn::harness
