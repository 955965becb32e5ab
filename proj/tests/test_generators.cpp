#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "widegaps/clusterers.hpp"
#include "widegaps/error.hpp"
#include "widegaps/generators.hpp"
#include "widegaps/oracle.hpp"

using namespace widegaps;

namespace {

Errc code_of(const GeneratorConfig& cfg) {
    try {
        generate_clusterable(cfg);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::InvariantBreach;
}

}  // namespace

TEST_CASE("config validation") {
    GeneratorConfig cfg;
    cfg.sizes = {1, 3};
    CHECK(code_of(cfg) == Errc::ConfigInvalid);
    cfg.sizes = {2, 2, 2};
    CHECK(code_of(cfg) == Errc::ConfigInvalid);  // k mismatch
    cfg.k = 1;
    cfg.sizes = {4};
    CHECK(code_of(cfg) == Errc::ConfigInvalid);
    cfg = GeneratorConfig{};
    cfg.gap_margin = 1.0;
    CHECK(code_of(cfg) == Errc::ConfigInvalid);
    cfg = GeneratorConfig{};
    cfg.intra_spread = 0.0;
    CHECK(code_of(cfg) == Errc::ConfigInvalid);
}

TEST_CASE("fixed pairs at distance 1 are variationally separable") {
    GeneratorConfig cfg;
    cfg.shape = BlockShape::fixed_pair;
    cfg.gap_margin = 2.0;
    const PlantedData data = generate_clusterable(cfg);
    CHECK(data.dataset.distances()(0, 1) == doctest::Approx(1.0));
    CHECK(data.dataset.distances()(2, 3) == doctest::Approx(1.0));
    CHECK(min_inter_distance(data.dataset, data.planted) > 2.0 * std::sqrt(2.0));
    CHECK(check_variational(data.dataset, data.planted).separable);
}

TEST_CASE("generator output is separable of its kind and deterministic") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        GeneratorConfig cfg;
        cfg.k = 2 + static_cast<int>(s % 4);
        cfg.sizes.assign(static_cast<std::size_t>(cfg.k), 2 + static_cast<int>(s % 5));
        cfg.kind = s % 2 ? Separation::residual : Separation::variational;
        cfg.dim = 1 + static_cast<int>(s % 3);
        cfg.rng_seed = s;
        const PlantedData a = generate_clusterable(cfg);
        const PlantedData b = generate_clusterable(cfg);
        CHECK(check_separation(a.dataset, a.planted, cfg.kind).separable);
        CHECK(a.dataset.distances().condensed()[0] == b.dataset.distances().condensed()[0]);
        CHECK(a.dataset.embedding()->coords == b.dataset.embedding()->coords);
        CHECK(a.dataset.embedding()->dim >= static_cast<std::size_t>(cfg.k - 1));
    }
}

TEST_CASE("small generator output matches the exhaustive optimum") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        GeneratorConfig cfg;
        cfg.k = 2 + static_cast<int>(s % 2);
        cfg.sizes = cfg.k == 2 ? std::vector<int>{3, 5} : std::vector<int>{2, 3, 4};
        cfg.kind = s % 3 ? Separation::residual : Separation::variational;
        cfg.rng_seed = 1000 + s;
        const PlantedData data = generate_clusterable(cfg);
        const OracleResult o = exhaustive_optimum(data.dataset, cfg.k);
        CHECK(o.best_clustering.same_partition(data.planted));
    }
}

TEST_CASE("boundary gap fails the strict check") {
    // four-point layout with the inter distance placed exactly on sqrt(2Q)
    const Dataset ds = fixtures::four_point(std::sqrt(2.0));
    CHECK_FALSE(check_variational(ds, fixtures::four_point_split()).separable);
    const Dataset res = fixtures::four_point(1.0 + 1e-14);
    CHECK_FALSE(check_residual(res, fixtures::four_point_split()).separable);
}

TEST_CASE("range generation") {
    GeneratorConfig pairs;
    pairs.sizes = {2, 2};
    const PlantedData p = generate_range_clusterable(pairs, 2);
    CHECK(check_range(p.dataset, p.planted, Separation::variational, 2).separable);

    GeneratorConfig six;
    six.sizes = {6, 6};
    for (std::uint64_t s = 0; s < 5; ++s) {
        six.rng_seed = s;
        const PlantedData d = generate_range_clusterable(six, 3);
        CHECK(check_range(d.dataset, d.planted, Separation::variational, 3).separable);
    }
    CHECK_THROWS_AS(generate_range_clusterable(six, 1), Error);
}

TEST_CASE("a persistent internal gap makes range planting fail") {
    GeneratorConfig cfg;
    cfg.sizes = {6, 6};
    cfg.shape = BlockShape::split_blobs;
    cfg.split_gap = 20.0;
    try {
        generate_range_clusterable(cfg, 2);
        FAIL("expected RangePlantFailed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::RangePlantFailed);
    }
}

TEST_CASE("richness witnesses") {
    const Clustering target({2, 0, 1, 2, 1, 0, 2, 1, 2}, 3);  // sizes 2, 3, 4
    for (Separation kind : {Separation::variational, Separation::residual}) {
        const Dataset w = richness_witness(target, kind, 3);
        const RangeResult r = discover_range(w, 3, kind, 3);
        CHECK(r.k == 3);
        CHECK(r.clustering.same_partition(target));
    }
    const std::vector<int> singleton{0, 0, 1};
    CHECK_THROWS_AS(richness_witness(std::span<const int>(singleton), Separation::variational), Error);

    const Dataset blob = richness_witness(Clustering::single_block(7), Separation::variational, 1);
    CHECK(blob.size() == 7);
    CHECK(discover_range(blob, 1, Separation::variational, 1).k == 1);
}

TEST_CASE("gaussian blobs have no structure") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Dataset blob = gaussian_blob(25, 2, 1.0, s);
        CHECK(blob.size() == 25);
        CHECK(discover_range(blob, 5, Separation::variational, s).k == 1);
    }
}
