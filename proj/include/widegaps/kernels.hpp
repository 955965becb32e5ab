#ifndef WIDEGAPS_KERNELS_HPP
#define WIDEGAPS_KERNELS_HPP

// Data-parallel hot loops. Each kernel exists twice: `serial` is the plain
// reference implementation, `omp` the OpenMP version. Both produce identical
// results for identical inputs (tests/test_kernels.cpp holds them to that).

#include <cstdint>
#include <vector>

#include "widegaps/clusterers.hpp"
#include "widegaps/core.hpp"
#include "widegaps/transforms.hpp"

namespace widegaps::kernels {

struct PartitionScan {
    double best_q = 0.0;
    std::vector<int> best_labels;
    std::uint64_t scanned = 0;
    std::vector<std::vector<int>> ties;  // lexicographic order, at most tie_cap
    std::uint64_t tie_count = 0;
};

struct TripleScan {
    std::vector<TransformViolation> violations;  // ordered by anchor point, at most cap
    std::size_t count = 0;
};

namespace serial {

/// Condensed Euclidean distances of the embedding rows.
std::vector<double> pairwise_distances(const Embedding& embedding);

/// Restricted-growth-string scan of all partitions into k blocks of size >= 2.
PartitionScan scan_partitions(const PseudoDistanceMatrix& d, int k, std::size_t tie_cap);

/// Number of seedings (of `trials`) that hit k distinct planted blocks.
std::uint64_t count_all_hit(const Dataset& dataset, const Clustering& planted, Seeding variant, std::uint64_t trials,
                            std::uint64_t rng_seed);

RestartOutcome best_of_restarts(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restarts);

/// Order and ratio clauses over intra-block triples (i, j, l).
TripleScan intra_triples(const PseudoDistanceMatrix& before, const PseudoDistanceMatrix& after,
                         const Clustering& clustering, std::size_t cap);

}  // namespace serial

namespace omp {

std::vector<double> pairwise_distances(const Embedding& embedding);
PartitionScan scan_partitions(const PseudoDistanceMatrix& d, int k, std::size_t tie_cap);
std::uint64_t count_all_hit(const Dataset& dataset, const Clustering& planted, Seeding variant, std::uint64_t trials,
                            std::uint64_t rng_seed);
RestartOutcome best_of_restarts(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restarts);
TripleScan intra_triples(const PseudoDistanceMatrix& before, const PseudoDistanceMatrix& after,
                         const Clustering& clustering, std::size_t cap);

}  // namespace omp

// Shared building blocks used by both backends.
namespace detail {

/// Enumerates valid partitions starting from a fixed label prefix.
class PartitionEnumerator {
public:
    PartitionEnumerator(const PseudoDistanceMatrix& d, int k);

    /// All feasible prefixes of the given length in lexicographic order.
    std::vector<std::vector<int>> prefixes(std::size_t depth) const;

    /// Lowest Q below `prefix` (lexicographically first on exact ties) and the number of leaves.
    void find_best(const std::vector<int>& prefix, double& best_q, std::vector<int>& best_labels,
                   std::uint64_t& scanned) const;

    /// Leaves below `prefix` within tolerance of `best_q`, excluding the exact best labels.
    void collect_ties(const std::vector<int>& prefix, double best_q, const std::vector<int>& best_labels,
                      std::size_t cap, std::vector<std::vector<int>>& ties, std::uint64_t& count) const;

    std::size_t size() const noexcept { return n_; }

private:
    template <typename Visit>
    void walk(const std::vector<int>& prefix, Visit&& visit) const;

    const PseudoDistanceMatrix& d_;
    std::size_t n_;
    int k_;
};

/// Writes distances from row i to every l > i into `out` (length n-i-1).
void distance_row(const Embedding& embedding, std::size_t i, double* out);

bool hits_all(const Dataset& dataset, const Clustering& planted, Seeding variant, std::uint64_t trial_seed, int k);

RestartOutcome run_restart(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restart);

void scan_anchor(const PseudoDistanceMatrix& before, const PseudoDistanceMatrix& after,
                 const std::vector<PointId>& block, PointId anchor, std::vector<TransformViolation>& out,
                 std::size_t& count, std::size_t cap);

}  // namespace detail

}  // namespace widegaps::kernels

#endif
