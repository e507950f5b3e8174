// Accuracy of each agent in a sequential-learning line under a finite signal model.

#include "opdyn/opdyn.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace opdyn;
    try {
        SignalModel model = SignalModel::bernoulli(Rational(1, 6));
        if (argc > 1) {
            std::ifstream in(argv[1]);
            if (!in) throw std::invalid_argument(std::string("cannot open ") + argv[1]);
            model = read_signal_model(in);
        }
        const std::size_t n = argc > 2 ? std::stoul(argv[2]) : 10;
        const auto ex = cascade::run_sequence_exact(model, n);
        for (std::size_t i = 0; i < n; ++i)
            std::cout << "agent " << i + 1 << ": P(correct) = " << ex.correct[i] << " ~ " << to_double(ex.correct[i]) << '\n';
        std::cout << "P(no cascade by agent " << n << ") = " << ex.no_cascade << '\n';
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
