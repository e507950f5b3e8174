// Averaging on a graph file or generator spec: prints alpha, the consensus and the learning probability.

#include "opdyn/opdyn.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace opdyn;
    const std::string graph = argc > 1 ? argv[1] : "star:6";
    const Rational delta = parse_rational(argc > 2 ? argv[2] : "1/10");
    try {
        const auto net = load_network(graph);
        const auto alpha = stationary_exact(net);
        std::cout << "alpha:";
        for (const auto& a : alpha) std::cout << ' ' << a;
        std::vector<Rational> ones(net.size(), Rational(0));
        ones[0] = 1;
        std::cout << "\nlimit with only agent 0 holding 1: " << degroot::limit_exact(net, ones) << '\n';
        if (net.size() <= degroot::kExactLearningLimit) {
            const auto e = degroot::learning_probability_exact(net, delta);
            std::cout << "P(limit on the right side of 1/2) = " << e.success << " (tie mass " << e.tie << ")\n";
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
