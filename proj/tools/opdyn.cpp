// opdyn: command-line front end for the opinion-dynamics experiments.

#include "opdyn/opdyn.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using opdyn::harness::ExperimentConfig;
using opdyn::harness::json;

struct Flags {
    std::string config_path;
    std::string graph, signal, delta, mode, out, csv, utility, tie, scenario, p;
    std::vector<std::string> cheaters, deltas;
    std::optional<std::uint64_t> trials, seed, horizon, n;
    bool exact = false;
    bool emit_lyapunov = false;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
}

/// File values first, then flags.
ExperimentConfig build_config(const std::string& family, const Flags& f) {
    ExperimentConfig c;
    if (!f.config_path.empty()) {
        c = opdyn::harness::config_from_json(read_json_file(f.config_path));
        if (!family.empty() && c.family != family)
            throw std::invalid_argument("config field 'family': file says '" + c.family + "' but the subcommand is '" + family + "'");
    }
    if (!family.empty()) c.family = family;
    if (!f.graph.empty()) c.graph = f.graph;
    if (!f.signal.empty()) c.signal = f.signal;
    if (!f.delta.empty()) c.signal = "bernoulli:" + f.delta;
    if (!f.mode.empty()) c.mode = f.mode;
    if (f.exact) c.mode = "exact";
    if (f.trials) c.trials = *f.trials;
    if (f.seed) c.seed = *f.seed;
    if (f.horizon) c.horizon = *f.horizon;
    if (f.n) c.options["n"] = *f.n;
    if (!f.utility.empty()) c.options["utility"] = f.utility;
    if (!f.tie.empty()) c.options["tie"] = f.tie;
    if (f.emit_lyapunov) c.options["emit_lyapunov"] = true;
    if (!f.p.empty()) c.options["p"] = f.p;
    if (!f.deltas.empty()) c.options["deltas"] = f.deltas;
    for (const auto& spec : f.cheaters) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--cheater expects agent=value, got '" + spec + "'");
        c.options["cheaters"][spec.substr(0, eq)] = spec.substr(eq + 1);
    }
    if (!f.scenario.empty()) {
        const auto colon = f.scenario.find(':');
        const std::string kind = f.scenario.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : f.scenario.substr(colon + 1);
        if (kind == "senate") {
            c.scenario = "senate-single";
            const auto comma = arg.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("--scenario senate:<n>,<k> expected");
            c.options["n"] = std::stoul(arg.substr(0, comma));
            c.options["k"] = std::stoul(arg.substr(comma + 1));
        } else if (kind == "chain-tie") {
            c.scenario = "chain-tie-single";
            c.options["n"] = std::stoul(arg);
        } else {
            c.scenario = f.scenario;
        }
    }
    opdyn::harness::validate(c);
    return c;
}

int emit(const opdyn::harness::Outcome& outcome, const Flags& f) {
    const auto text = opdyn::harness::to_json(outcome.record).dump(2);
    if (f.out.empty()) std::cout << text << '\n';
    else {
        std::ofstream os(f.out);
        if (!os) throw std::invalid_argument("cannot write '" + f.out + "'");
        os << text << '\n';
    }
    if (!f.csv.empty()) {
        std::ofstream os(f.csv);
        if (!os) throw std::invalid_argument("cannot write '" + f.csv + "'");
        opdyn::harness::write_csv(os, outcome.trajectory);
    }
    return outcome.record.passed() ? 0 : 1;
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "JSON config file; flags override its values");
    sub->add_option("--graph", f.graph, "network spec (chain:N, cycle:N, complete:N, star:N, grid:RxC, bipartite:AxB, "
                                        "random_regular:N:D[:SEED], random_directed:N[:EXTRA[:SEED]], optional +plain) or a graph file");
    sub->add_option("--signal", f.signal, "signal spec: bernoulli:<delta>, gaussian:<variance>, finite:<k>:<mu0>;<mu1>, file:<path>");
    sub->add_option("--delta", f.delta, "shorthand for --signal bernoulli:<delta>");
    sub->add_option("--mode", f.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    sub->add_flag("--exact", f.exact, "same as --mode exact");
    sub->add_option("--trials", f.trials, "Monte Carlo trials");
    sub->add_option("--seed", f.seed, "experiment seed");
    sub->add_option("--horizon", f.horizon, "rounds to simulate (0 = family default)");
    sub->add_option("--out", f.out, "write the JSON result here instead of stdout");
    sub->add_option("--csv", f.csv, "write the trajectory as round,agent,value rows");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"opdyn: opinion dynamics and social learning experiments"};
    app.footer("Environment: OPDYN_WORKERS sets the Monte Carlo worker count (default: hardware threads).\n"
               "Exit status: 0 on success, 1 if an assertion failed, 2 on invalid input.");
    app.require_subcommand(1);
    Flags f;

    auto* degroot = app.add_subcommand("degroot", "repeated averaging: limit, learning probability, cheaters");
    add_common(degroot, f);
    degroot->add_option("--cheater", f.cheaters, "agent=value held fixed forever (repeatable)");

    auto* voter = app.add_subcommand("voter", "voter model: absorption probabilities or Monte Carlo learning");
    add_common(voter, f);

    auto* strong = app.add_subcommand("voter-strong", "strong/weak voter variant");
    add_common(strong, f);

    auto* majority = app.add_subcommand("majority", "majority dynamics and retention of information");
    add_common(majority, f);
    majority->add_flag("--emit-lyapunov", f.emit_lyapunov, "record L_t and J_t along the sampled trajectory");

    auto* bayes = app.add_subcommand("bayes", "exact Bayesian learning on a network");
    add_common(bayes, f);
    bayes->add_option("--utility", f.utility, "continuous or discrete")->check(CLI::IsMember({"continuous", "discrete"}));
    bayes->add_option("--tie", f.tie, "discrete tie rule: one or own")->check(CLI::IsMember({"one", "own"}));
    bayes->add_option("--scenario", f.scenario, "senate:<n>,<k> or chain-tie:<n>");

    auto* cascade = app.add_subcommand("cascade", "sequential learning and information cascades");
    add_common(cascade, f);
    cascade->add_option("--n", f.n, "number of agents");

    auto* three = app.add_subcommand("three-bit", "MAP accuracy from three independent bits");
    add_common(three, f);
    three->add_option("--p", f.p, "base accuracy p in (1/2, 1)");
    three->add_option("--deltas", f.deltas, "three offsets delta_i")->expected(3);

    std::string name;
    auto* run = app.add_subcommand("run", "run a config file or a named registry experiment");
    add_common(run, f);
    run->add_option("--name", name, "registry experiment name");

    auto* reg = app.add_subcommand("registry", "list registry experiments, or print one config");
    reg->add_option("name", name, "experiment name");

    std::vector<std::string> only;
    auto* accept = app.add_subcommand("accept", "run the acceptance suite; exits nonzero on any failure");
    accept->add_option("--only", only, "criterion number or registry name (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        namespace h = opdyn::harness;
        if (reg->parsed()) {
            if (name.empty())
                for (const auto& n : h::registry_names()) std::cout << n << '\n';
            else std::cout << h::to_json(h::registry(name)).dump(2) << '\n';
            return 0;
        }
        if (accept->parsed()) {
            std::vector<const h::Criterion*> selected;
            if (only.empty())
                for (const auto& c : h::criteria()) selected.push_back(&c);
            for (const auto& key : only) selected.push_back(&h::find_criterion(key));
            bool ok = true;
            for (const auto* c : selected) {
                const auto r = h::run_criterion(*c);
                h::print_line(std::cout, r);
                ok = ok && r.passed();
            }
            return ok ? 0 : 1;
        }
        if (run->parsed()) {
            ExperimentConfig c;
            if (!name.empty()) {
                c = h::registry(name);
                if (!f.config_path.empty()) throw std::invalid_argument("use either --name or --config");
            }
            const auto base = name.empty() ? build_config("", f) : c;
            return emit(h::run_experiment_full(base), f);
        }
        for (auto* sub : {degroot, voter, strong, majority, bayes, cascade, three})
            if (sub->parsed()) return emit(h::run_experiment_full(build_config(sub->get_name(), f)), f);
    } catch (const std::exception& e) {
        std::cerr << "opdyn: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
