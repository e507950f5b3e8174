#pragma once

// Experiment configuration, result records, and the named-experiment registry.

#include "opdyn/rational.hpp"
#include "opdyn/stats.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Declarative experiment description. `scenario` selects a named check; empty means a
/// plain run of the family on the given graph and signal.
struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    std::string family;  // degroot | voter | voter-strong | majority | bayes | cascade | three-bit
    std::string scenario;
    std::string graph;
    std::string signal;
    std::string mode = "exact";  // exact | mc
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    std::uint64_t horizon = 0;
    json options = json::object();

    bool operator==(const ExperimentConfig&) const = default;
};

inline const std::vector<std::string>& families() {
    static const std::vector<std::string> f{"degroot", "voter", "voter-strong", "majority", "bayes", "cascade", "three-bit"};
    return f;
}

/// Throws std::invalid_argument naming the offending field.
inline void validate(const ExperimentConfig& c) {
    auto bad = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("config field '" + field + "': " + why);
    };
    if (c.schema_version != kSchemaVersion) bad("schema_version", "unsupported version " + std::to_string(c.schema_version));
    bool known = false;
    for (const auto& f : families()) known = known || f == c.family;
    if (!known) bad("family", "unknown family '" + c.family + "'");
    if (c.mode != "exact" && c.mode != "mc") bad("mode", "must be 'exact' or 'mc'");
    if (c.mode == "mc" && c.trials == 0 && c.scenario.empty()) bad("trials", "monte carlo mode needs trials > 0");
    if (!c.options.is_object()) bad("options", "must be a JSON object");
}

inline json to_json(const ExperimentConfig& c) {
    return json{{"schema_version", c.schema_version}, {"family", c.family}, {"scenario", c.scenario},
                {"graph", c.graph}, {"signal", c.signal}, {"mode", c.mode}, {"trials", c.trials},
                {"seed", c.seed}, {"horizon", c.horizon}, {"options", c.options}};
}

inline ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    static const std::vector<std::string> known{"schema_version", "family", "scenario", "graph", "signal",
                                                "mode", "trials", "seed", "horizon", "options"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw std::invalid_argument("config field '" + key + "': unknown field");
    }
    ExperimentConfig c;
    auto read = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(dst);
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
        }
    };
    read("schema_version", c.schema_version);
    read("family", c.family);
    read("scenario", c.scenario);
    read("graph", c.graph);
    read("signal", c.signal);
    read("mode", c.mode);
    read("trials", c.trials);
    read("seed", c.seed);
    read("horizon", c.horizon);
    if (j.contains("options")) c.options = j.at("options");
    validate(c);
    return c;
}

struct Assertion {
    bool passed = false;
    std::string detail;
};

struct ResultRecord {
    ExperimentConfig config;
    std::map<std::string, double> estimates;
    std::map<std::string, std::string> exact;  // rationals as p/q strings
    std::map<std::string, Interval> intervals;
    std::map<std::string, Assertion> assertions;
    std::map<std::string, json> series;  // per-index sequences and histograms
    double runtime_seconds = 0.0;

    bool passed() const {
        for (const auto& [name, a] : assertions)
            if (!a.passed) return false;
        return true;
    }

    void check(const std::string& name, bool ok, const std::string& detail = {}) {
        auto& a = assertions[name];
        a.passed = ok;
        a.detail = detail;
    }
    void set_exact(const std::string& name, const Rational& value) {
        exact[name] = to_string(value);
        estimates[name] = to_double(value);
    }
    void set_proportion(const std::string& name, const Proportion& p) {
        estimates[name] = p.estimate();
        intervals[name] = p.interval();
    }
};

/// Keys are emitted in sorted order, so equal records serialize to identical bytes.
inline json to_json(const ResultRecord& r, bool include_runtime = true) {
    json j;
    j["config"] = to_json(r.config);
    j["estimates"] = r.estimates;
    j["exact"] = r.exact;
    json iv = json::object();
    for (const auto& [k, v] : r.intervals) iv[k] = json{{"low", v.low}, {"high", v.high}};
    j["intervals"] = iv;
    json as = json::object();
    for (const auto& [k, v] : r.assertions) as[k] = json{{"passed", v.passed}, {"detail", v.detail}};
    j["assertions"] = as;
    j["series"] = r.series;
    j["passed"] = r.passed();
    if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace opdyn::harness
