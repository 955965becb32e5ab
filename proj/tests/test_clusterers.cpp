#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "widegaps/clusterers.hpp"
#include "widegaps/error.hpp"
#include "widegaps/generators.hpp"

using namespace widegaps;

TEST_CASE("seeding rejects k outside 2..n/2") {
    const Dataset ds = fixtures::four_point(3.0);
    CHECK_THROWS_AS(seed_kmeanspp(ds, 1, 0), Error);
    CHECK_THROWS_AS(seed_kmeanspp(ds, 3, 0), Error);
    CHECK_THROWS_AS(seed_res_kmeanspp(ds, 1, 0), Error);
}

TEST_CASE("seeding is deterministic and distinct") {
    const Dataset ds = fixtures::random_pseudo(12, 5);
    for (std::uint64_t s = 0; s < 20; ++s)
        for (Seeding v : {Seeding::classic, Seeding::residual}) {
            const SeedingTrace a = seed(ds, 4, v, s);
            const SeedingTrace b = seed(ds, 4, v, s);
            CHECK(a.seeds == b.seeds);
            CHECK(a.step_weights == b.step_weights);
            std::vector<PointId> sorted = a.seeds;
            std::sort(sorted.begin(), sorted.end());
            CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
            CHECK(a.step_weights.size() == 4);
        }
}

TEST_CASE("far point is drawn with its weight share") {
    // Tight pack at 0, 0.1, ..., 0.4 and one point at 100.
    const Dataset ds = Dataset::from_points(Embedding{6, 1, {0.0, 0.1, 0.2, 0.3, 0.4, 100.0}});
    // Exact probability of drawing the far point second, averaged over the uniform first seed.
    double exact = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < 6; ++i) total += ds.distances().squared(i, j);
        exact += ds.distances().squared(j, 5) / total;
    }
    exact /= 5.0;
    const double pack_sum = 0.01 + 0.04 + 0.09 + 0.16;  // worst first seed in the pack
    const double bound = 1e4 / (1e4 + pack_sum);
    CHECK(exact >= bound - 1e-3);

    int first_in_pack = 0;
    int far_second = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const SeedingTrace t = seed_kmeanspp(ds, 2, s);
        if (t.seeds[0] == 5) continue;
        ++first_in_pack;
        if (t.seeds[1] == 5) ++far_second;
    }
    const double p = static_cast<double>(far_second) / first_in_pack;
    const double sd = std::sqrt(exact * (1 - exact) / first_in_pack);
    CHECK(p >= bound - 3 * sd - 1e-12);
    CHECK(std::abs(p - exact) <= 4 * sd + 1e-4);
}

TEST_CASE("residual weights on the inter 1.1 example") {
    const Dataset ds = fixtures::four_point(1.1);
    const Clustering planted = fixtures::four_point_split();
    for (std::uint64_t s = 0; s < 200; ++s) {
        const SeedingTrace t = seed_res_kmeanspp(ds, 2, s, &planted);
        REQUIRE(t.step_weights.size() == 2);
        const PointId first = t.seeds[0];
        for (PointId i = 0; i < 4; ++i) {
            const double w = t.step_weights[1][i];
            if (i == first) CHECK(w == 0.0);
            else if (planted.label(i) == planted.label(first)) CHECK(w == 0.0);
            else CHECK(w == doctest::Approx(1.1 * 1.1 - 1.0));
        }
        CHECK(t.all_distinct_blocks_hit());
        CHECK(t.uniform_fallback_steps.empty());
    }
}

TEST_CASE("equal distances take the uniform fallback under residual seeding") {
    const Dataset ds = fixtures::matrix_dataset(6, [](auto, auto) { return 2.0; });
    const SeedingTrace t = seed_res_kmeanspp(ds, 3, 9);
    CHECK(t.uniform_fallback_steps == std::vector<std::size_t>{1, 2});
    const SeedingTrace c = seed_kmeanspp(ds, 3, 9);
    CHECK(c.uniform_fallback_steps.empty());
}

TEST_CASE("derive_seed separates streams") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}

TEST_CASE("refinement from one seed per planted block returns the planted clustering") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        GeneratorConfig cfg;
        cfg.k = 3;
        cfg.sizes = {3, 5, 4};
        cfg.kind = s % 2 ? Separation::residual : Separation::variational;
        cfg.rng_seed = s;
        const PlantedData data = generate_clusterable(cfg);
        SeedingTrace trace;
        for (const auto& block : data.planted.blocks()) trace.seeds.push_back(block[s % block.size()]);
        const RefineResult r = refine_pairwise(data.dataset, trace);
        CHECK(r.clustering.same_partition(data.planted));
    }
}

TEST_CASE("refinement with k = n/2 recovers the planted pairs") {
    const Dataset ds = fixtures::matrix_dataset(8, [](auto i, auto l) { return i / 2 == l / 2 ? 1.0 : 40.0 + i + l; });
    SeedingTrace trace;
    trace.seeds = {0, 3, 4, 7};
    const RefineResult r = refine_pairwise(ds, trace);
    CHECK(r.clustering.same_partition(Clustering({0, 0, 1, 1, 2, 2, 3, 3}, 4)));
}

TEST_CASE("refinement never raises Q, also on non-Euclidean input") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        const Dataset ds = fixtures::random_pseudo(10 + s % 10, s);
        const SeedingTrace t = seed(ds, 2 + static_cast<int>(s % 3), s % 2 ? Seeding::residual : Seeding::classic, s);
        const RefineResult r = refine_pairwise(ds, t);
        for (std::size_t i = 1; i < r.q_history.size(); ++i) CHECK(r.q_history[i] <= r.q_history[i - 1]);
        CHECK(r.q == doctest::Approx(cost_q(ds, r.clustering)));
        CHECK_FALSE(r.hit_sweep_cap);
        for (auto size : r.clustering.block_sizes()) CHECK(size >= 2);
        // converged: the last sweep changed nothing
        REQUIRE(r.q_history.size() >= 2);
        CHECK(r.q_history.back() == r.q_history[r.q_history.size() - 2]);
    }
}

TEST_CASE("discover_range guard and no-structure runs") {
    const Dataset blob = gaussian_blob(30, 2, 1.0, 4);
    const RangeResult one = discover_range(blob, 1, Separation::variational, 0);
    CHECK(one.k == 1);
    CHECK(one.per_k_log.empty());
    for (Separation kind : {Separation::variational, Separation::residual}) {
        const RangeResult r = discover_range(blob, 5, kind, 3);
        CHECK(r.k == 1);
        CHECK(r.per_k_log.size() == 4);
    }
}

TEST_CASE("discover_range recovers a planted 3-separation") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        GeneratorConfig cfg;
        cfg.k = 3;
        cfg.sizes = {5, 6, 7};
        cfg.kind = s % 2 ? Separation::residual : Separation::variational;
        cfg.rng_seed = s;
        const PlantedData data = generate_range_clusterable(cfg, 3);
        const RangeResult r = discover_range(data.dataset, 5, cfg.kind, s);
        CHECK(r.k == 3);
        CHECK(r.clustering.same_partition(data.planted));
    }
}

TEST_CASE("best_of_restarts agrees across backends") {
    const Dataset ds = fixtures::random_pseudo(16, 77);
    for (int k : {2, 3, 5}) {
        const RestartOutcome a = best_of_restarts(ds, k, Seeding::classic, 5, 6, Backend::serial);
        const RestartOutcome b = best_of_restarts(ds, k, Seeding::classic, 5, 6, Backend::parallel);
        CHECK(a.clustering == b.clustering);
        CHECK(a.q == b.q);
        CHECK(a.restart == b.restart);
    }
}

TEST_CASE("seeding names round-trip") {
    for (Seeding s : {Seeding::classic, Seeding::residual}) CHECK(parse_seeding(seeding_name(s)) == s);
    CHECK(seeding_for(Separation::residual) == Seeding::residual);
}
