#include "widegaps/oracle.hpp"

#include <string>

#include "widegaps/kernels.hpp"

namespace widegaps {

OracleResult exhaustive_optimum(const Dataset& dataset, int k, Backend backend) {
    const std::size_t n = dataset.size();
    if (n > kMaxEnumerationSize)
        throw Error(Errc::TooLarge, "exhaustive search is capped at n=" + std::to_string(kMaxEnumerationSize) +
                                        ", got n=" + std::to_string(n));
    if (k < 1 || static_cast<std::size_t>(2 * k) > n)
        throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " outside 1..n/2 for n=" + std::to_string(n));

    const kernels::PartitionScan scan = backend == Backend::serial
                                            ? kernels::serial::scan_partitions(dataset.distances(), k, kTieCap)
                                            : kernels::omp::scan_partitions(dataset.distances(), k, kTieCap);
    OracleResult out;
    out.best_q = scan.best_q;
    out.best_clustering = Clustering(scan.best_labels, k);
    out.num_partitions_scanned = scan.scanned;
    out.tie_count = scan.tie_count;
    out.ties.reserve(scan.ties.size());
    for (const auto& t : scan.ties) out.ties.emplace_back(t, k);
    return out;
}

std::uint64_t restricted_stirling2(int n, int k) {
    if (n < 0 || k < 0) return 0;
    // a(n,k) = k a(n-1,k) + (n-1) a(n-2,k-1): the last item joins an existing block of
    // size >= 2, or forms a new pair with one of the other n-1 items.
    std::vector<std::vector<std::uint64_t>> a(static_cast<std::size_t>(n) + 1,
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(k) + 1, 0));
    a[0][0] = 1;
    for (int m = 1; m <= n; ++m)
        for (int j = 1; j <= k; ++j) {
            std::uint64_t v = static_cast<std::uint64_t>(j) * a[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(j)];
            if (m >= 2)
                v += static_cast<std::uint64_t>(m - 1) * a[static_cast<std::size_t>(m - 2)][static_cast<std::size_t>(j - 1)];
            a[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = v;
        }
    return a[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double centre = (p + z2 / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double hit_probability_bound(int m, int k) {
    if (m < 1 || k < 1) throw Error(Errc::InvalidArgs, "bound needs m >= 1 and k >= 1");
    double p = 1.0;
    for (int i = 1; i <= k - 1; ++i) p *= 1.0 - 1.0 / (static_cast<double>(m) * static_cast<double>(k - i) + 1.0);
    return p;
}

HitProbability montecarlo_hit_probability(const Dataset& dataset, const Clustering& planted, Seeding variant,
                                          std::uint64_t trials, std::uint64_t rng_seed, Backend backend) {
    require_compatible(dataset, planted);
    if (trials < 1000) throw Error(Errc::InvalidArgs, "at least 1000 trials are required");

    HitProbability out;
    out.trials = trials;
    out.k = planted.k();
    const auto sizes = planted.block_sizes();
    out.m = static_cast<int>(*std::min_element(sizes.begin(), sizes.end()));
    out.bound = hit_probability_bound(out.m, out.k);

    if (planted.k() == 1) {
        out.hits = trials;  // a single block is always hit
    } else {
        out.hits = backend == Backend::serial
                       ? kernels::serial::count_all_hit(dataset, planted, variant, trials, rng_seed)
                       : kernels::omp::count_all_hit(dataset, planted, variant, trials, rng_seed);
    }
    out.fraction = static_cast<double>(out.hits) / static_cast<double>(trials);
    std::tie(out.lower, out.upper) = wilson_interval(out.hits, trials);
    return out;
}

}  // namespace widegaps
