#include <doctest.h>

#include <cmath>
#include <functional>

#include "fixtures.hpp"
#include "widegaps/error.hpp"
#include "widegaps/oracle.hpp"

using namespace widegaps;

namespace {

// Independent count: all set partitions of n by plain recursion, keeping those with k blocks of size >= 2.
std::uint64_t brute_count(int n, int k) {
    std::vector<int> sizes;
    std::uint64_t count = 0;
    std::function<void(int)> rec = [&](int item) {
        if (item == n) {
            if (static_cast<int>(sizes.size()) == k && std::all_of(sizes.begin(), sizes.end(), [](int s) { return s >= 2; }))
                ++count;
            return;
        }
        for (std::size_t b = 0; b < sizes.size(); ++b) {
            ++sizes[b];
            rec(item + 1);
            --sizes[b];
        }
        sizes.push_back(1);
        rec(item + 1);
        sizes.pop_back();
    };
    rec(0);
    return count;
}

// Independent minimum: every labelling in k^n, filtered to valid ones.
double brute_min_q(const Dataset& ds, int k) {
    const std::size_t n = ds.size();
    std::vector<int> labels(n, 0);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int lab : labels) ++sizes[static_cast<std::size_t>(lab)];
        if (std::all_of(sizes.begin(), sizes.end(), [](int s) { return s >= 2; }))
            best = std::min(best, cost_q(ds, Clustering(labels, k)));
        std::size_t i = 0;
        while (i < n && ++labels[i] == k) labels[i++] = 0;
        if (i == n) break;
    }
    return best;
}

}  // namespace

TEST_CASE("partition counts match brute force") {
    for (int n = 0; n <= 11; ++n)
        for (int k = 0; k <= 5; ++k) CHECK(restricted_stirling2(n, k) == brute_count(n, k));
    CHECK(restricted_stirling2(4, 2) == 3);
}

TEST_CASE("four-point example") {
    const OracleResult r = exhaustive_optimum(fixtures::four_point(1.1), 2);
    CHECK(r.best_q == doctest::Approx(1.0));
    CHECK(r.num_partitions_scanned == 3);
    CHECK(r.best_clustering.same_partition(fixtures::four_point_split()));
    CHECK(r.ties.empty());
}

TEST_CASE("k = 1 scans one partition") {
    const Dataset ds = fixtures::random_pseudo(6, 3);
    const OracleResult r = exhaustive_optimum(ds, 1);
    CHECK(r.num_partitions_scanned == 1);
    CHECK(r.best_q == doctest::Approx(cost_q(ds, Clustering::single_block(6))));
}

TEST_CASE("exhaustive optimum matches brute force on random pseudo-distances") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const int n = 4 + static_cast<int>(s % 5);
        const int k = 1 + static_cast<int>(s % static_cast<std::uint64_t>(n / 2));
        const Dataset ds = fixtures::random_pseudo(static_cast<std::size_t>(n), s);
        const OracleResult r = exhaustive_optimum(ds, k);
        CHECK(r.num_partitions_scanned == restricted_stirling2(n, k));
        CHECK(r.best_q == doctest::Approx(brute_min_q(ds, k)).epsilon(1e-12));
        CHECK(cost_q(ds, r.best_clustering) == doctest::Approx(r.best_q));
    }
}

TEST_CASE("ties are reported") {
    // all distances equal: every pairing of 6 points into 3 pairs ties
    const Dataset ds = fixtures::matrix_dataset(6, [](auto, auto) { return 1.0; });
    const OracleResult r = exhaustive_optimum(ds, 3);
    CHECK(r.tie_count == restricted_stirling2(6, 3) - 1);
    CHECK(r.ties.size() == r.tie_count);
    CHECK(r.best_clustering == Clustering({0, 0, 1, 1, 2, 2}, 3));
}

TEST_CASE("serial and parallel scans agree") {
    for (std::uint64_t s = 0; s < 6; ++s) {
        const Dataset ds = fixtures::random_pseudo(9 + s % 3, s);
        const OracleResult a = exhaustive_optimum(ds, 3, Backend::serial);
        const OracleResult b = exhaustive_optimum(ds, 3, Backend::parallel);
        CHECK(a.best_q == b.best_q);
        CHECK(a.best_clustering == b.best_clustering);
        CHECK(a.num_partitions_scanned == b.num_partitions_scanned);
        CHECK(a.tie_count == b.tie_count);
    }
}

TEST_CASE("oracle preconditions") {
    CHECK_THROWS_AS(exhaustive_optimum(fixtures::random_pseudo(15, 1), 2), Error);
    CHECK_THROWS_AS(exhaustive_optimum(fixtures::random_pseudo(6, 1), 4), Error);
    CHECK_THROWS_AS(exhaustive_optimum(fixtures::random_pseudo(6, 1), 0), Error);
}

TEST_CASE("hit probability bound") {
    CHECK(hit_probability_bound(50, 3) == doctest::Approx((100.0 / 101.0) * (50.0 / 51.0)));
    CHECK(hit_probability_bound(50, 3) == doctest::Approx(0.970685).epsilon(1e-6));
    CHECK(hit_probability_bound(7, 1) == 1.0);
    CHECK(hit_probability_bound(1, 2) == 0.5);
    CHECK_THROWS_AS(hit_probability_bound(0, 2), Error);
}

TEST_CASE("wilson interval") {
    const auto [lo, hi] = wilson_interval(50, 100, 1.959963984540054);
    CHECK(lo == doctest::Approx(0.403832).epsilon(1e-5));
    CHECK(hi == doctest::Approx(0.596168).epsilon(1e-5));
    const auto [lo1, hi1] = wilson_interval(1000, 1000);
    CHECK(hi1 == doctest::Approx(1.0));
    CHECK(lo1 < 1.0);
}

TEST_CASE("monte carlo hit probability") {
    const Dataset ds = fixtures::four_point(3.0);
    const HitProbability one = montecarlo_hit_probability(ds, Clustering::single_block(4), Seeding::classic, 1000, 0);
    CHECK(one.fraction == 1.0);
    CHECK(one.bound == 1.0);
    const HitProbability res = montecarlo_hit_probability(ds, fixtures::four_point_split(), Seeding::residual, 2000, 1);
    CHECK(res.fraction == 1.0);  // co-member weight is zero
    CHECK(res.m == 2);
    CHECK_THROWS_AS(montecarlo_hit_probability(ds, fixtures::four_point_split(), Seeding::classic, 10, 0), Error);
    const HitProbability s = montecarlo_hit_probability(ds, fixtures::four_point_split(), Seeding::classic, 2000, 4,
                                                        Backend::serial);
    const HitProbability p = montecarlo_hit_probability(ds, fixtures::four_point_split(), Seeding::classic, 2000, 4,
                                                        Backend::parallel);
    CHECK(s.hits == p.hits);
}
