#pragma once

// Weighted social networks: representation, validation, generators, file IO and the
// Markov-chain utilities (stationary distribution, mixing, balls) built on top.

#include "opdyn/linalg.hpp"
#include "opdyn/rational.hpp"
#include "opdyn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn {

using Agent = std::size_t;

/// Tolerance on row sums for networks carrying real (non-rational) weights.
inline constexpr double kRowSumTolerance = 1e-12;

/// Out-arc i -> target. Agent i observes `target`; the weight is w(i, target).
struct Arc {
    Agent target;
    Rational weight;
    double value;
};

struct Edge {
    Agent source;
    Agent target;
    Rational weight;
};

/// Directed weighted graph. Undirected networks keep both arcs of every edge, and the
/// `directed` flag only records that the arc set is expected to be symmetric.
/// Weights are exact rationals; `exact()` is false when any weight came from a double,
/// in which case row sums are checked against kRowSumTolerance instead of exactly.
class Network {
public:
    Network() = default;
    Network(std::size_t n, bool directed) : directed_(directed), out_(n) {}

    void add_arc(Agent source, Agent target, const Rational& weight) {
        check_agent(source);
        check_agent(target);
        out_[source].push_back(Arc{target, weight, to_double(weight)});
    }

    void add_arc(Agent source, Agent target, double weight) {
        check_agent(source);
        check_agent(target);
        out_[source].push_back(Arc{target, Rational(weight), weight});
        exact_ = false;
    }

    std::size_t size() const { return out_.size(); }
    bool directed() const { return directed_; }
    bool exact() const { return exact_; }

    std::span<const Arc> out(Agent i) const { return out_.at(i); }

    /// |N(i)|, counting i itself when the self-loop is present.
    std::size_t neighborhood_size(Agent i) const { return out_.at(i).size(); }

    /// Number of neighbors other than i.
    std::size_t degree(Agent i) const {
        return static_cast<std::size_t>(
            std::count_if(out_.at(i).begin(), out_.at(i).end(), [i](const Arc& a) { return a.target != i; }));
    }

    std::size_t max_degree() const {
        std::size_t d = 0;
        for (Agent i = 0; i < size(); ++i) d = std::max(d, degree(i));
        return d;
    }

    bool has_arc(Agent source, Agent target) const {
        const auto& row = out_.at(source);
        return std::any_of(row.begin(), row.end(), [target](const Arc& a) { return a.target == target; });
    }

    std::optional<Rational> weight(Agent source, Agent target) const {
        for (const auto& a : out_.at(source))
            if (a.target == target) return a.weight;
        return std::nullopt;
    }

    /// Number of arcs (i, j) with j in N(i), self-loops included.
    std::size_t arc_count() const {
        std::size_t c = 0;
        for (const auto& row : out_) c += row.size();
        return c;
    }

    /// Number of unordered non-loop edges (for undirected networks).
    std::size_t undirected_edge_count() const {
        std::size_t c = 0;
        for (Agent i = 0; i < size(); ++i)
            for (const auto& a : out_[i])
                if (a.target > i) ++c;
        return c;
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> e;
        for (Agent i = 0; i < size(); ++i)
            for (const auto& a : out_[i]) e.push_back(Edge{i, a.target, a.weight});
        return e;
    }

    /// Shortest-path distances along out-arcs; unreachable agents get size().
    std::vector<std::size_t> distances_from(Agent source) const {
        std::vector<std::size_t> dist(size(), size());
        std::queue<Agent> q;
        dist.at(source) = 0;
        q.push(source);
        while (!q.empty()) {
            Agent u = q.front();
            q.pop();
            for (const auto& a : out_[u]) {
                if (dist[a.target] == size()) {
                    dist[a.target] = dist[u] + 1;
                    q.push(a.target);
                }
            }
        }
        return dist;
    }

private:
    void check_agent(Agent a) const {
        if (a >= out_.size()) throw std::out_of_range("agent index " + std::to_string(a) + " out of range");
    }

    bool directed_ = true;
    bool exact_ = true;
    std::vector<std::vector<Arc>> out_;
};

// ---------------------------------------------------------------------------------------
// Validation

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

namespace detail {

inline bool reaches_all(const std::vector<std::vector<Agent>>& adj, Agent start) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<Agent> stack{start};
    seen[start] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        Agent u = stack.back();
        stack.pop_back();
        for (Agent v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count == adj.size();
}

} // namespace detail

inline bool strongly_connected(const Network& net) {
    if (net.size() == 0) return false;
    std::vector<std::vector<Agent>> fwd(net.size()), rev(net.size());
    for (Agent i = 0; i < net.size(); ++i)
        for (const auto& a : net.out(i)) {
            fwd[i].push_back(a.target);
            rev[a.target].push_back(i);
        }
    return detail::reaches_all(fwd, 0) && detail::reaches_all(rev, 0);
}

inline ValidationReport validate(const Network& net, bool require_stochastic) {
    ValidationReport report;
    auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
    if (net.size() == 0) {
        fail("network has no agents");
        return report;
    }
    for (Agent i = 0; i < net.size(); ++i) {
        auto row = net.out(i);
        if (row.empty()) fail("agent " + std::to_string(i) + " has out-degree 0");
        std::vector<Agent> targets;
        for (const auto& a : row) targets.push_back(a.target);
        std::sort(targets.begin(), targets.end());
        if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
            fail("agent " + std::to_string(i) + " has parallel arcs");
        if (!net.directed()) {
            for (const auto& a : row)
                if (!net.has_arc(a.target, i))
                    fail("undirected network lacks reverse arc " + std::to_string(a.target) + "->" +
                         std::to_string(i));
        }
    }
    if (!strongly_connected(net)) fail("network is not strongly connected");

    if (require_stochastic) {
        for (Agent i = 0; i < net.size(); ++i) {
            if (!net.has_arc(i, i)) fail("agent " + std::to_string(i) + " lacks a self-loop");
            Rational sum = 0;
            double sum_d = 0.0;
            for (const auto& a : net.out(i)) {
                if (a.weight <= 0) fail("arc " + std::to_string(i) + "->" + std::to_string(a.target) + " has nonpositive weight");
                sum += a.weight;
                sum_d += a.value;
            }
            const bool sums_to_one = net.exact() ? (sum == 1) : (std::abs(sum_d - 1.0) <= kRowSumTolerance);
            if (!sums_to_one) {
                std::ostringstream os;
                os << "row " << i << " sums to " << std::setprecision(17) << sum_d << ", not 1";
                fail(os.str());
            }
        }
    }
    return report;
}

/// Majority dynamics needs an undirected network whose closed neighborhoods have odd size.
inline ValidationReport validate_odd_neighborhoods(const Network& net) {
    ValidationReport report = validate(net, false);
    if (net.directed()) report.violations.emplace_back("majority dynamics requires an undirected network");
    for (Agent i = 0; i < net.size(); ++i)
        if (net.neighborhood_size(i) % 2 == 0)
            report.violations.push_back("agent " + std::to_string(i) + " has even |N(i)| = " +
                                        std::to_string(net.neighborhood_size(i)));
    return report;
}

inline void require_valid(const Network& net, bool stochastic) {
    auto r = validate(net, stochastic);
    if (!r.ok()) throw std::invalid_argument("invalid network: " + r.violations.front());
}

// ---------------------------------------------------------------------------------------
// Generators

enum class GraphKind { chain, cycle, complete, star, grid, bipartite, random_regular, random_directed };

/// lazy_uniform: N(i) = neighbors + {i}, w(i,j) = 1/|N(i)|.
/// uniform: no self-loops, w(i,j) = 1/deg(i). Used for majority graphs with odd degree.
enum class Weighting { lazy_uniform, uniform };

struct GraphSpec {
    GraphKind kind = GraphKind::chain;
    std::size_t n = 1;
    std::size_t degree = 0;   // random_regular: d; random_directed: extra arcs per agent
    std::size_t columns = 0;  // grid: n = rows * columns; bipartite: size of the second side
    std::uint64_t seed = 0;
    Weighting weighting = Weighting::lazy_uniform;
};

namespace detail {

inline Network from_adjacency(const std::vector<std::vector<Agent>>& nbrs, Weighting weighting) {
    Network net(nbrs.size(), false);
    for (Agent i = 0; i < nbrs.size(); ++i) {
        std::vector<Agent> row = nbrs[i];
        if (weighting == Weighting::lazy_uniform) row.push_back(i);
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        if (row.empty()) continue;
        const Rational w = make_rational(1, static_cast<long>(row.size()));
        for (Agent j : row) net.add_arc(i, j, w);
    }
    return net;
}

inline void link(std::vector<std::vector<Agent>>& nbrs, Agent a, Agent b) {
    if (a == b) return;
    if (std::find(nbrs[a].begin(), nbrs[a].end(), b) != nbrs[a].end()) return;
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
}

inline std::vector<std::vector<Agent>> random_regular_adjacency(std::size_t n, std::size_t d, std::uint64_t seed) {
    // Pairing model with restarts; deterministic in (n, d, seed).
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        Stream rng(seed, attempt);
        std::vector<Agent> stubs;
        for (Agent i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) stubs.push_back(i);
        for (std::size_t k = stubs.size(); k > 1; --k) std::swap(stubs[k - 1], stubs[rng.below(k)]);
        std::vector<std::vector<Agent>> nbrs(n);
        bool simple = true;
        for (std::size_t k = 0; k + 1 < stubs.size() && simple; k += 2) {
            Agent a = stubs[k], b = stubs[k + 1];
            if (a == b || std::find(nbrs[a].begin(), nbrs[a].end(), b) != nbrs[a].end()) simple = false;
            else {
                nbrs[a].push_back(b);
                nbrs[b].push_back(a);
            }
        }
        if (!simple) continue;
        Network probe = from_adjacency(nbrs, Weighting::lazy_uniform);
        if (strongly_connected(probe)) return nbrs;
    }
    throw std::runtime_error("random_regular: no simple connected pairing found");
}

} // namespace detail

inline Network generate(const GraphSpec& spec) {
    const std::size_t n = spec.n;
    if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
    std::vector<std::vector<Agent>> nbrs(n);
    switch (spec.kind) {
    case GraphKind::chain:
        for (Agent i = 0; i + 1 < n; ++i) detail::link(nbrs, i, i + 1);
        break;
    case GraphKind::cycle:
        for (Agent i = 0; i + 1 < n; ++i) detail::link(nbrs, i, i + 1);
        if (n > 2) detail::link(nbrs, n - 1, 0);
        break;
    case GraphKind::complete:
        for (Agent i = 0; i < n; ++i)
            for (Agent j = i + 1; j < n; ++j) detail::link(nbrs, i, j);
        break;
    case GraphKind::star:
        for (Agent i = 1; i < n; ++i) detail::link(nbrs, 0, i);
        break;
    case GraphKind::grid: {
        const std::size_t cols = spec.columns == 0 ? n : spec.columns;
        if (n % cols != 0) throw std::invalid_argument("generate: grid size not divisible by column count");
        for (Agent i = 0; i < n; ++i) {
            if ((i % cols) + 1 < cols) detail::link(nbrs, i, i + 1);
            if (i + cols < n) detail::link(nbrs, i, i + cols);
        }
        break;
    }
    case GraphKind::bipartite: {
        if (spec.columns == 0 || spec.columns >= n) throw std::invalid_argument("generate: bipartite sides must be nonempty");
        const std::size_t left = n - spec.columns;
        for (Agent i = 0; i < left; ++i)
            for (Agent j = left; j < n; ++j) detail::link(nbrs, i, j);
        break;
    }
    case GraphKind::random_regular: {
        const std::size_t d = spec.degree;
        if (d >= n || (n * d) % 2 != 0 || d == 0)
            throw std::invalid_argument("generate: infeasible degree sequence for random_regular(" +
                                        std::to_string(d) + ", n=" + std::to_string(n) + ")");
        nbrs = detail::random_regular_adjacency(n, d, spec.seed);
        break;
    }
    case GraphKind::random_directed: {
        // Directed Hamiltonian cycle plus random extra arcs, self-loops, and random
        // positive integer weights normalized per row (exact rationals).
        Network net(n, true);
        Stream rng(spec.seed, 0);
        std::vector<Agent> order(n);
        for (Agent i = 0; i < n; ++i) order[i] = i;
        for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
        std::vector<std::vector<Agent>> targets(n);
        for (Agent k = 0; k < n; ++k) {
            targets[order[k]].push_back(order[(k + 1) % n]);
            targets[order[k]].push_back(order[k]);
        }
        for (Agent i = 0; i < n; ++i) {
            for (std::size_t e = 0; e < spec.degree; ++e) targets[i].push_back(rng.below(n));
            std::sort(targets[i].begin(), targets[i].end());
            targets[i].erase(std::unique(targets[i].begin(), targets[i].end()), targets[i].end());
            std::vector<long> raw;
            long total = 0;
            for (std::size_t k = 0; k < targets[i].size(); ++k) {
                raw.push_back(1 + static_cast<long>(rng.below(9)));
                total += raw.back();
            }
            for (std::size_t k = 0; k < targets[i].size(); ++k)
                net.add_arc(i, targets[i][k], make_rational(raw[k], total));
        }
        return net;
    }
    }
    return detail::from_adjacency(nbrs, spec.weighting);
}

inline Network chain(std::size_t n, Weighting w = Weighting::lazy_uniform) { return generate({GraphKind::chain, n, 0, 0, 0, w}); }
inline Network cycle(std::size_t n, Weighting w = Weighting::lazy_uniform) { return generate({GraphKind::cycle, n, 0, 0, 0, w}); }
inline Network complete(std::size_t n, Weighting w = Weighting::lazy_uniform) { return generate({GraphKind::complete, n, 0, 0, 0, w}); }
inline Network star(std::size_t n, Weighting w = Weighting::lazy_uniform) { return generate({GraphKind::star, n, 0, 0, 0, w}); }
inline Network grid(std::size_t rows, std::size_t cols, Weighting w = Weighting::lazy_uniform) {
    return generate({GraphKind::grid, rows * cols, 0, cols, 0, w});
}

/// Builds an undirected network from an explicit edge list.
inline Network from_edge_list(std::size_t n, const std::vector<std::pair<Agent, Agent>>& edge_list,
                              Weighting w = Weighting::lazy_uniform) {
    std::vector<std::vector<Agent>> nbrs(n);
    for (auto [a, b] : edge_list) {
        if (a >= n || b >= n) throw std::out_of_range("from_edge_list: agent out of range");
        detail::link(nbrs, a, b);
    }
    return detail::from_adjacency(nbrs, w);
}

/// Parses generator specs such as `cycle:8`, `grid:3x3`, `bipartite:3x3`, `random_regular:10:3:7`,
/// `random_directed:20:2:5`, with an optional `+plain` suffix for uniform weighting.
inline GraphSpec parse_graph_spec(const std::string& text) {
    std::string body = text;
    GraphSpec spec;
    if (auto plus = body.find('+'); plus != std::string::npos) {
        if (body.substr(plus + 1) != "plain") throw std::invalid_argument("unknown weighting suffix in '" + text + "'");
        spec.weighting = Weighting::uniform;
        body = body.substr(0, plus);
    }
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() < 2) throw std::invalid_argument("graph spec '" + text + "' needs kind:n");
    const std::string& kind = parts[0];
    auto num = [&](std::size_t idx) -> std::size_t {
        if (idx >= parts.size()) throw std::invalid_argument("graph spec '" + text + "' is missing a field");
        return static_cast<std::size_t>(std::stoull(parts[idx]));
    };
    if (kind == "chain" || kind == "path") spec.kind = GraphKind::chain;
    else if (kind == "cycle") spec.kind = GraphKind::cycle;
    else if (kind == "complete") spec.kind = GraphKind::complete;
    else if (kind == "star") spec.kind = GraphKind::star;
    else if (kind == "grid") {
        spec.kind = GraphKind::grid;
        auto x = parts[1].find('x');
        if (x == std::string::npos) throw std::invalid_argument("grid spec must be grid:RxC");
        std::size_t rows = std::stoull(parts[1].substr(0, x));
        spec.columns = std::stoull(parts[1].substr(x + 1));
        spec.n = rows * spec.columns;
        return spec;
    } else if (kind == "bipartite") {
        spec.kind = GraphKind::bipartite;
        auto x = parts[1].find('x');
        if (x == std::string::npos) throw std::invalid_argument("bipartite spec must be bipartite:AxB");
        spec.columns = std::stoull(parts[1].substr(x + 1));
        spec.n = std::stoull(parts[1].substr(0, x)) + spec.columns;
        return spec;
    } else if (kind == "random_regular") {
        spec.kind = GraphKind::random_regular;
        spec.degree = num(2);
        spec.seed = parts.size() > 3 ? num(3) : 0;
    } else if (kind == "random_directed") {
        spec.kind = GraphKind::random_directed;
        spec.degree = parts.size() > 2 ? num(2) : 1;
        spec.seed = parts.size() > 3 ? num(3) : 0;
    } else throw std::invalid_argument("unknown graph kind '" + kind + "'");
    spec.n = num(1);
    return spec;
}

// ---------------------------------------------------------------------------------------
// Graph file format:
//   n <count> directed|undirected
//   <src> <dst> <weight>        (0-indexed; weight decimal or p/q; self-loops explicit)

inline Network read_network(std::istream& in) {
    std::string line;
    std::size_t n = 0;
    bool directed = true, have_header = false;
    Network net;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string a, b, c;
        if (!(ls >> a)) continue;
        if (!have_header) {
            if (a != "n" || !(ls >> b >> c)) throw std::invalid_argument("graph file: expected header 'n <count> directed|undirected'");
            n = std::stoull(b);
            if (c == "directed") directed = true;
            else if (c == "undirected") directed = false;
            else throw std::invalid_argument("graph file: header must say directed or undirected");
            net = Network(n, directed);
            have_header = true;
            continue;
        }
        if (!(ls >> b >> c)) throw std::invalid_argument("graph file line " + std::to_string(line_no) + ": expected 'src dst weight'");
        const Agent src = std::stoull(a), dst = std::stoull(b);
        if (src >= n || dst >= n) throw std::invalid_argument("graph file line " + std::to_string(line_no) + ": agent out of range");
        if (c.find('/') != std::string::npos || c.find_first_of(".eE") == std::string::npos) net.add_arc(src, dst, parse_rational(c));
        else net.add_arc(src, dst, std::stod(c));
    }
    if (!have_header) throw std::invalid_argument("graph file: missing header");
    return net;
}

inline Network read_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file '" + path + "'");
    return read_network(in);
}

inline void write_network(std::ostream& out, const Network& net) {
    out << "n " << net.size() << (net.directed() ? " directed" : " undirected") << "\n";
    for (Agent i = 0; i < net.size(); ++i)
        for (const auto& a : net.out(i)) {
            out << i << " " << a.target << " ";
            if (net.exact()) out << a.weight.get_str();
            else out << std::setprecision(17) << a.value;
            out << "\n";
        }
}

/// Accepts either a path to a graph file or a generator spec.
inline Network load_network(const std::string& spec_or_path) {
    if (std::ifstream probe(spec_or_path); probe.good()) return read_network(probe);
    return generate(parse_graph_spec(spec_or_path));
}

// ---------------------------------------------------------------------------------------
// Markov-chain utilities

struct StationaryDistribution {
    std::vector<double> alpha;
    std::optional<std::vector<Rational>> exact;  // present when solved with rational arithmetic
    double residual = 0.0;                       // ||alpha^T P - alpha^T||_inf
    std::size_t iterations = 0;                  // power-iteration steps (0 for exact solve)
};

inline double stationary_residual(const Network& net, std::span<const double> alpha) {
    std::vector<double> next(net.size(), 0.0);
    for (Agent i = 0; i < net.size(); ++i)
        for (const auto& a : net.out(i)) next[a.target] += alpha[i] * a.value;
    double r = 0.0;
    for (Agent i = 0; i < net.size(); ++i) r = std::max(r, std::abs(next[i] - alpha[i]));
    return r;
}

/// Exact left unit eigenvector of the weight matrix, normalized to sum 1.
inline std::vector<Rational> stationary_exact(const Network& net) {
    const std::size_t n = net.size();
    linalg::RationalMatrix a(n, std::vector<Rational>(n));
    // Rows 0..n-2: sum_i alpha_i (P_ij - delta_ij) = 0 for j < n-1; last row: sum alpha = 1.
    for (Agent i = 0; i < n; ++i) {
        for (const auto& arc : net.out(i))
            if (arc.target + 1 < n) a[arc.target][i] += arc.weight;
        if (i + 1 < n) a[i][i] -= 1;
    }
    for (Agent i = 0; i < n; ++i) a[n - 1][i] = 1;
    std::vector<Rational> rhs(n, Rational(0));
    rhs[n - 1] = 1;
    return linalg::solve(std::move(a), std::move(rhs));
}

inline constexpr std::size_t kExactStationaryLimit = 200;
inline constexpr std::size_t kPowerIterationCap = 1'000'000;

inline StationaryDistribution stationary_distribution(const Network& net, double tol = 1e-12) {
    require_valid(net, true);
    StationaryDistribution out;
    const std::size_t n = net.size();
    if (n <= kExactStationaryLimit && net.exact()) {
        auto exact = stationary_exact(net);
        out.alpha.reserve(n);
        for (const auto& q : exact) out.alpha.push_back(to_double(q));
        out.exact = std::move(exact);
        out.residual = stationary_residual(net, out.alpha);
        return out;
    }
    std::vector<double> alpha(n, 1.0 / static_cast<double>(n)), next(n);
    for (std::size_t it = 1; it <= kPowerIterationCap; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (Agent i = 0; i < n; ++i)
            for (const auto& a : net.out(i)) next[a.target] += alpha[i] * a.value;
        double sum = 0.0;
        for (double v : next) sum += v;
        double change = 0.0;
        for (Agent i = 0; i < n; ++i) {
            next[i] /= sum;
            change = std::max(change, std::abs(next[i] - alpha[i]));
        }
        alpha.swap(next);
        if (change <= tol * 0.1) {
            out.residual = stationary_residual(net, alpha);
            if (out.residual <= tol) {
                out.alpha = std::move(alpha);
                out.iterations = it;
                return out;
            }
        }
    }
    throw std::runtime_error("stationary_distribution: power iteration did not converge");
}

/// Closed form for lazy-uniform undirected networks: alpha_i = |N(i)| / sum_j |N(j)|.
inline std::vector<Rational> degree_proportional(const Network& net) {
    long total = 0;
    for (Agent i = 0; i < net.size(); ++i) total += static_cast<long>(net.neighborhood_size(i));
    std::vector<Rational> alpha;
    for (Agent i = 0; i < net.size(); ++i) alpha.push_back(make_rational(static_cast<long>(net.neighborhood_size(i)), total));
    return alpha;
}

/// Advances the distributions of the chain from every start simultaneously.
class MixingTracker {
public:
    MixingTracker(const Network& net, std::vector<double> alpha) : net_(net), alpha_(std::move(alpha)) {
        const std::size_t n = net_.size();
        rows_.assign(n, std::vector<double>(n, 0.0));
        for (Agent i = 0; i < n; ++i) rows_[i][i] = 1.0;
    }

    void step() {
        const std::size_t n = net_.size();
        std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
        for (Agent s = 0; s < n; ++s)
            for (Agent i = 0; i < n; ++i) {
                const double mass = rows_[s][i];
                if (mass == 0.0) continue;
                for (const auto& a : net_.out(i)) next[s][a.target] += mass * a.value;
            }
        rows_.swap(next);
        ++t_;
    }

    double tv(Agent start) const {
        double d = 0.0;
        for (Agent j = 0; j < net_.size(); ++j) d += std::abs(rows_[start][j] - alpha_[j]);
        return 0.5 * d;
    }

    double max_tv() const {
        double m = 0.0;
        for (Agent s = 0; s < net_.size(); ++s) m = std::max(m, tv(s));
        return m;
    }

    std::size_t rounds() const { return t_; }
    const std::vector<double>& distribution(Agent start) const { return rows_.at(start); }

private:
    const Network& net_;
    std::vector<double> alpha_;
    std::vector<std::vector<double>> rows_;
    std::size_t t_ = 0;
};

/// Total-variation distance between the t-step distribution started at `start` and alpha.
inline double mixing_tv(const Network& net, const StationaryDistribution& stationary, Agent start, std::size_t t) {
    if (start >= net.size()) throw std::out_of_range("mixing_tv: start agent out of range");
    std::vector<double> dist(net.size(), 0.0), next(net.size());
    dist[start] = 1.0;
    for (std::size_t k = 0; k < t; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (Agent i = 0; i < net.size(); ++i)
            if (dist[i] != 0.0)
                for (const auto& a : net.out(i)) next[a.target] += dist[i] * a.value;
        dist.swap(next);
    }
    double d = 0.0;
    for (Agent j = 0; j < net.size(); ++j) d += std::abs(dist[j] - stationary.alpha[j]);
    return 0.5 * d;
}

inline double mixing_tv(const Network& net, Agent start, std::size_t t) {
    return mixing_tv(net, stationary_distribution(net), start, t);
}

struct Subgraph {
    Network network;
    std::vector<Agent> vertices;  // original index of each vertex, ascending
};

/// Induced subgraph on {j : d(center, j) <= radius}, distances along out-arcs.
inline Subgraph ball(const Network& net, Agent center, std::size_t radius) {
    auto dist = net.distances_from(center);
    Subgraph sub;
    std::vector<std::size_t> index(net.size(), net.size());
    for (Agent j = 0; j < net.size(); ++j)
        if (dist[j] <= radius) {
            index[j] = sub.vertices.size();
            sub.vertices.push_back(j);
        }
    sub.network = Network(sub.vertices.size(), net.directed());
    for (Agent j : sub.vertices)
        for (const auto& a : net.out(j))
            if (index[a.target] != net.size()) {
                if (net.exact()) sub.network.add_arc(index[j], index[a.target], a.weight);
                else sub.network.add_arc(index[j], index[a.target], a.value);
            }
    return sub;
}

} // namespace opdyn
