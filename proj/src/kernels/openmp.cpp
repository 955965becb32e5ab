#include <limits>

#include "widegaps/kernels.hpp"

namespace widegaps::kernels::omp {

namespace {

// Prefix length used to hand out enumeration subtrees; a handful of hundred tasks at most.
constexpr std::size_t kSplitDepth = 6;

}  // namespace

std::vector<double> pairwise_distances(const Embedding& embedding) {
    const std::size_t n = embedding.n;
    std::vector<double> out(PseudoDistanceMatrix::condensed_size(n));
    const auto rows = static_cast<std::ptrdiff_t>(n > 0 ? n - 1 : 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
        const auto row = static_cast<std::size_t>(i);
        detail::distance_row(embedding, row, out.data() + PseudoDistanceMatrix::flat_index(n, row, row + 1));
    }
    return out;
}

PartitionScan scan_partitions(const PseudoDistanceMatrix& d, int k, std::size_t tie_cap) {
    detail::PartitionEnumerator en(d, k);
    const auto prefixes = en.prefixes(kSplitDepth);
    const auto tasks = static_cast<std::ptrdiff_t>(prefixes.size());

    std::vector<double> best_q(prefixes.size(), std::numeric_limits<double>::infinity());
    std::vector<std::vector<int>> best_labels(prefixes.size());
    std::vector<std::uint64_t> scanned(prefixes.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < tasks; ++t) {
        const auto u = static_cast<std::size_t>(t);
        en.find_best(prefixes[u], best_q[u], best_labels[u], scanned[u]);
    }

    // Prefixes come in lexicographic order, so the first strict minimum is the lexicographically first one.
    PartitionScan scan;
    scan.best_q = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < prefixes.size(); ++u) {
        scan.scanned += scanned[u];
        if (best_q[u] < scan.best_q) {
            scan.best_q = best_q[u];
            scan.best_labels = best_labels[u];
        }
    }

    std::vector<std::vector<std::vector<int>>> ties(prefixes.size());
    std::vector<std::uint64_t> counts(prefixes.size(), 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < tasks; ++t) {
        const auto u = static_cast<std::size_t>(t);
        en.collect_ties(prefixes[u], scan.best_q, scan.best_labels, tie_cap, ties[u], counts[u]);
    }
    for (std::size_t u = 0; u < prefixes.size(); ++u) {
        scan.tie_count += counts[u];
        for (auto& t : ties[u]) {
            if (scan.ties.size() >= tie_cap) break;
            scan.ties.push_back(std::move(t));
        }
    }
    return scan;
}

std::uint64_t count_all_hit(const Dataset& dataset, const Clustering& planted, Seeding variant, std::uint64_t trials,
                            std::uint64_t rng_seed) {
    std::uint64_t hits = 0;
    const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (std::int64_t t = 0; t < n; ++t)
        if (detail::hits_all(dataset, planted, variant, derive_seed(rng_seed, static_cast<std::uint64_t>(t)), planted.k()))
            ++hits;
    return hits;
}

RestartOutcome best_of_restarts(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restarts) {
    std::vector<std::optional<RestartOutcome>> runs(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < restarts; ++r) runs[static_cast<std::size_t>(r)] = detail::run_restart(dataset, k, variant, rng_seed, r);

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
        if (runs[r]->q < runs[best]->q) best = r;
    return std::move(*runs[best]);
}

TripleScan intra_triples(const PseudoDistanceMatrix& before, const PseudoDistanceMatrix& after,
                         const Clustering& clustering, std::size_t cap) {
    const auto blocks = clustering.blocks();
    std::vector<std::pair<std::size_t, PointId>> anchors;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (PointId i : blocks[b]) anchors.emplace_back(b, i);

    std::vector<std::vector<TransformViolation>> found(anchors.size());
    std::vector<std::size_t> counts(anchors.size(), 0);
    const auto tasks = static_cast<std::ptrdiff_t>(anchors.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t t = 0; t < tasks; ++t) {
        const auto u = static_cast<std::size_t>(t);
        detail::scan_anchor(before, after, blocks[anchors[u].first], anchors[u].second, found[u], counts[u], cap);
    }

    TripleScan scan;
    for (std::size_t u = 0; u < anchors.size(); ++u) {
        scan.count += counts[u];
        for (auto& v : found[u]) {
            if (scan.violations.size() >= cap) break;
            scan.violations.push_back(v);
        }
    }
    return scan;
}

}  // namespace widegaps::kernels::omp
