#ifndef WIDEGAPS_AXIOMS_HPP
#define WIDEGAPS_AXIOMS_HPP

// End-to-end property suites: generate -> transform -> recluster -> compare.

#include <cstdint>
#include <string>
#include <vector>

#include "widegaps/clusterers.hpp"
#include "widegaps/generators.hpp"

namespace widegaps {

struct SuiteFailure {
    int trial = 0;
    std::uint64_t seed = 0;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    int passed = 0;
    int total = 0;
    std::vector<SuiteFailure> failures;

    bool ok() const noexcept { return passed == total; }
};

/// Random planted configuration for trial `trial`: k in {2,3,4}, block sizes 3..8,
/// gap margin in [1.5, 3], kind alternating by trial parity.
GeneratorConfig random_config(std::uint64_t seed, int trial);

/// Same labels after scaling all distances by 0.5, 2 and 10 (one pass per trial covers all three).
SuiteResult scale_suite(int trials, std::uint64_t seed, int k_x = 5);

/// Same RangeResult after a lower-bounded relative consistency transform relative to the found clustering.
SuiteResult consistency_suite(int trials, std::uint64_t seed, int k_x = 5);

/// Random target partition (blocks >= 2, k <= 5) is recovered from its witness.
SuiteResult richness_suite(int trials, std::uint64_t seed);

}  // namespace widegaps

#endif
