// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// --expect-fail N marks a criterion whose failure is documented; the exit status is 0
// exactly when the failing set equals the expected set.

#include "opdyn/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>

int main(int argc, char** argv) {
    namespace h = opdyn::harness;
    CLI::App app{"acceptance suite"};
    std::vector<std::string> only;
    std::vector<int> expected;
    app.add_option("--only", only, "criterion number or registry name (repeatable)");
    app.add_option("--expect-fail", expected, "criterion number expected to fail (repeatable)");
    CLI11_PARSE(app, argc, argv);

    std::vector<const h::Criterion*> selected;
    if (only.empty())
        for (const auto& c : h::criteria()) selected.push_back(&c);
    for (const auto& key : only) selected.push_back(&h::find_criterion(key));

    std::set<int> failed, selected_numbers;
    for (const auto* c : selected) {
        const auto r = h::run_criterion(*c);
        h::print_line(std::cout, r);
        selected_numbers.insert(c->number);
        if (!r.passed()) failed.insert(c->number);
    }
    std::set<int> expect;
    for (int k : expected)
        if (selected_numbers.count(k)) expect.insert(k);
    std::cout << selected.size() - failed.size() << " of " << selected.size() << " criteria passed";
    if (!expect.empty()) {
        std::cout << "; expected failures:";
        for (int k : expect) std::cout << ' ' << k;
    }
    std::cout << '\n';
    if (failed != expect) {
        std::cout << "unexpected outcome: failing set differs from the expected set\n";
        return 1;
    }
    return 0;
}
