#ifndef AOI_ACCEPTANCE_HPP
#define AOI_ACCEPTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aoi {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    int jobs = 0;  // 0 = hardware concurrency
    std::uint64_t seed = 42;
};

// Runs every acceptance criterion, printing one pass/fail line per criterion
// to `os` as it completes. Returns all results.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& os);

}  // namespace aoi

#endif  // AOI_ACCEPTANCE_HPP
