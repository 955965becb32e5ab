#ifndef WIDEGAPS_ORACLE_HPP
#define WIDEGAPS_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "widegaps/clusterers.hpp"
#include "widegaps/core.hpp"
#include "widegaps/exec.hpp"

namespace widegaps {

/// Enumeration refuses datasets larger than this.
inline constexpr std::size_t kMaxEnumerationSize = 14;

/// Stored tie list is truncated here; `tie_count` is always exact.
inline constexpr std::size_t kTieCap = 4096;

struct OracleResult {
    double best_q = 0.0;
    Clustering best_clustering = Clustering::single_block(2);
    std::uint64_t num_partitions_scanned = 0;
    std::vector<Clustering> ties;  // co-optimal within 1e-9 relative, excluding best
    std::uint64_t tie_count = 0;
};

/// Every partition into exactly k blocks of size >= 2; returns the lowest Q
/// (lexicographically first labels among exact ties) and all near-ties.
OracleResult exhaustive_optimum(const Dataset& dataset, int k, Backend backend = Backend::parallel);

/// Number of partitions of n items into k blocks each of size >= 2.
std::uint64_t restricted_stirling2(int n, int k);

struct HitProbability {
    double fraction = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double lower = 0.0;  // Wilson 99%
    double upper = 0.0;
    double bound = 1.0;  // product bound at m = min block size
    int m = 0;
    int k = 0;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

/// Wilson score interval for `hits` out of `trials` at normal quantile z.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = kWilsonZ99);

/// Fraction of seedings whose k seeds fall in k distinct planted blocks. trials >= 1000.
HitProbability montecarlo_hit_probability(const Dataset& dataset, const Clustering& planted, Seeding variant,
                                          std::uint64_t trials, std::uint64_t rng_seed,
                                          Backend backend = Backend::parallel);

/// prod_{i=1}^{k-1} (1 - 1/(m(k-i)+1)).
double hit_probability_bound(int m, int k);

}  // namespace widegaps

#endif
