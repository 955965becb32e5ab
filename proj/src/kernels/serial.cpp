#include <limits>

#include "widegaps/kernels.hpp"

namespace widegaps::kernels::serial {

std::vector<double> pairwise_distances(const Embedding& embedding) {
    const std::size_t n = embedding.n;
    std::vector<double> out(PseudoDistanceMatrix::condensed_size(n));
    for (std::size_t i = 0; i + 1 < n; ++i)
        detail::distance_row(embedding, i, out.data() + PseudoDistanceMatrix::flat_index(n, i, i + 1));
    return out;
}

PartitionScan scan_partitions(const PseudoDistanceMatrix& d, int k, std::size_t tie_cap) {
    detail::PartitionEnumerator en(d, k);
    PartitionScan scan;
    scan.best_q = std::numeric_limits<double>::infinity();
    en.find_best({}, scan.best_q, scan.best_labels, scan.scanned);
    en.collect_ties({}, scan.best_q, scan.best_labels, tie_cap, scan.ties, scan.tie_count);
    return scan;
}

std::uint64_t count_all_hit(const Dataset& dataset, const Clustering& planted, Seeding variant, std::uint64_t trials,
                            std::uint64_t rng_seed) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t)
        if (detail::hits_all(dataset, planted, variant, derive_seed(rng_seed, t), planted.k())) ++hits;
    return hits;
}

RestartOutcome best_of_restarts(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restarts) {
    RestartOutcome best = detail::run_restart(dataset, k, variant, rng_seed, 0);
    for (int r = 1; r < restarts; ++r) {
        RestartOutcome cand = detail::run_restart(dataset, k, variant, rng_seed, r);
        if (cand.q < best.q) best = std::move(cand);
    }
    return best;
}

TripleScan intra_triples(const PseudoDistanceMatrix& before, const PseudoDistanceMatrix& after,
                         const Clustering& clustering, std::size_t cap) {
    TripleScan scan;
    for (const auto& block : clustering.blocks())
        for (PointId i : block) detail::scan_anchor(before, after, block, i, scan.violations, scan.count, cap);
    return scan;
}

}  // namespace widegaps::kernels::serial
