// Runs the full acceptance suite; one line per criterion, non-zero exit when
// any criterion fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "aoi/acceptance.hpp"

int main(int argc, char** argv) {
    aoi::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--jobs" && i + 1 < argc) opt.jobs = std::atoi(argv[++i]);
        else if (arg == "--seed" && i + 1 < argc) opt.seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::cerr << "usage: acceptance [--jobs N] [--seed S]\n";
            return 2;
        }
    }

    const auto results = aoi::run_acceptance(opt, std::cout);
    int failed = 0;
    for (const auto& r : results)
        if (!r.pass) ++failed;
    if (failed == 0) {
        std::cout << "acceptance: all " << results.size() << " criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << failed << " of " << results.size() << " criteria failed\n";
    return 1;
}
