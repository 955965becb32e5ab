#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fixtures.hpp"
#include "widegaps/error.hpp"
#include "widegaps/generators.hpp"
#include "widegaps/linalg.hpp"
#include "widegaps/transforms.hpp"

using namespace widegaps;

namespace {

// Independent oracle: Eigen's self-adjoint solver on B = -1/2 J D^2 J.
double eigen_min_eigenvalue(const Dataset& ds) {
    const auto n = static_cast<Eigen::Index>(ds.size());
    Eigen::MatrixXd d2(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index l = 0; l < n; ++l)
            d2(i, l) = ds.distances().squared(static_cast<std::size_t>(i), static_cast<std::size_t>(l));
    const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const Eigen::MatrixXd b = -0.5 * j * d2 * j;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Dataset shifted(const Dataset& ds, double delta) { return apply_transform(ds, TransformSpec::delta_shift(delta), 0); }

}  // namespace

TEST_CASE("jacobi agrees with Eigen") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const std::size_t n = 2 + s % 12;
        std::mt19937_64 gen(s);
        std::normal_distribution<double> g;
        std::vector<double> a(n * n);
        Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = i; l < n; ++l) {
                const double v = g(gen);
                a[i * n + l] = a[l * n + i] = v;
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = v;
                m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)) = v;
            }
        const std::vector<double> mine = linalg::jacobi_eigenvalues(a, n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        REQUIRE(mine.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(mine[i] == doctest::Approx(es.eigenvalues()(static_cast<Eigen::Index>(i))).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("scale") {
    const Dataset ds = fixtures::random_pseudo(7, 1);
    const Dataset same = apply_transform(ds, TransformSpec::scale(1.0), 0);
    for (std::size_t i = 0; i < ds.distances().condensed().size(); ++i)
        CHECK(same.distances().condensed()[i] == ds.distances().condensed()[i]);
    const Dataset twice = apply_transform(ds, TransformSpec::scale(2.0), 0);
    for (std::size_t i = 0; i < ds.distances().condensed().size(); ++i)
        CHECK(twice.distances().condensed()[i] == doctest::Approx(2 * ds.distances().condensed()[i]));
    CHECK(sigma(twice) == doctest::Approx(2 * sigma(ds)));
    CHECK(verify_transform(ds, twice, TransformSpec::scale(2.0)).ok);
    CHECK_FALSE(verify_transform(ds, twice, TransformSpec::scale(3.0)).ok);

    const Dataset pts = Dataset::from_points(fixtures::random_embedding(5, 2, 3));
    CHECK(apply_transform(pts, TransformSpec::scale(4.0), 0).has_embedding());
}

TEST_CASE("delta shift moves beta by delta") {
    const Dataset ds = fixtures::four_point(3.0);
    const Dataset moved = shifted(ds, 5.0);
    CHECK(beta(moved, fixtures::four_point_split()) == doctest::Approx(6.0));
    CHECK(verify_transform(ds, moved, TransformSpec::delta_shift(5.0)).ok);
    CHECK_FALSE(moved.has_embedding());
}

TEST_CASE("spec validation") {
    TransformSpec bad;
    bad.kind = TransformKind::relative_consistency;
    bad.intra_factor = 0.5;
    bad.inter_growth = 2.0;
    CHECK_THROWS_AS(bad.validate(), Error);  // clustering missing
    CHECK_THROWS_AS(TransformSpec::scale(0.0).validate(), Error);
    CHECK_THROWS_AS(TransformSpec::scale(-1.0).validate(), Error);
    TransformSpec extra = TransformSpec::scale(2.0);
    extra.delta = 1.0;
    CHECK_THROWS_AS(extra.validate(), Error);
    CHECK_THROWS_AS(TransformSpec::consistency(TransformKind::consistency, fixtures::four_point_split(), 1.5, 2.0).validate(),
                    Error);
    CHECK_THROWS_AS(TransformSpec::consistency(TransformKind::consistency, fixtures::four_point_split(), 0.5, 0.9).validate(),
                    Error);
}

TEST_CASE("identity transforms verify under every kind") {
    const Dataset ds = fixtures::random_pseudo(8, 2);
    const Clustering cl = fixtures::random_clustering(8, 3, 2);
    for (TransformKind k : {TransformKind::consistency, TransformKind::relative_consistency,
                            TransformKind::lower_bounded_relative_consistency}) {
        const TransformSpec spec = TransformSpec::consistency(k, cl, 1.0, 1.0);
        CHECK(verify_transform(ds, ds, spec).ok);
        CHECK(verify_transform(ds, apply_transform(ds, spec, 4), spec).ok);
    }
    CHECK(verify_transform(ds, ds, TransformSpec::scale(1.0)).ok);
    CHECK(verify_transform(ds, ds, TransformSpec::delta_shift(0.0)).ok);
}

TEST_CASE("an intra pair grown by 1% is one consistency violation") {
    const Dataset ds = fixtures::four_point(3.0);
    std::vector<double> c(ds.distances().condensed().begin(), ds.distances().condensed().end());
    c[0] *= 1.01;  // pair (0,1), intra
    const Dataset grown = Dataset::from_distances(PseudoDistanceMatrix(4, c));
    const TransformSpec spec = TransformSpec::consistency(TransformKind::consistency, fixtures::four_point_split(), 0.5, 2.0);
    const TransformVerification v = verify_transform(ds, grown, spec);
    CHECK_FALSE(v.ok);
    CHECK(v.violation_count == 1);
    REQUIRE(v.violations.size() == 1);
    CHECK(v.violations[0].clause == TransformClause::intra_not_longer);
}

TEST_CASE("lower-bounded relative consistency clamps at sigma") {
    const Dataset ds = fixtures::four_point(3.0);
    const TransformSpec spec = TransformSpec::consistency(TransformKind::lower_bounded_relative_consistency,
                                                          fixtures::four_point_split(), 0.5, 1.0);
    // intra factor drawn from [0.5, 1]; intra distances are all sigma and stay there
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset moved = apply_transform(ds, spec, s);
        CHECK(moved.distances()(0, 1) == 1.0);
        CHECK(moved.distances()(2, 3) == 1.0);
        CHECK(verify_transform(ds, moved, spec).ok);
    }
}

TEST_CASE("random transforms of every consistency kind verify") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const std::size_t n = 6 + s % 10;
        const Dataset ds = fixtures::random_pseudo(n, s);
        const Clustering cl = fixtures::random_clustering(n, 1 + static_cast<int>(s % (n / 2)), s);
        for (TransformKind k : {TransformKind::consistency, TransformKind::relative_consistency,
                                TransformKind::lower_bounded_relative_consistency}) {
            const TransformSpec spec = TransformSpec::consistency(k, cl, 0.3, 2.5);
            const Dataset moved = apply_transform(ds, spec, s);
            CHECK(verify_transform(ds, moved, spec).ok);
            CHECK(verify_transform(ds, moved, spec, Backend::serial).violation_count ==
                  verify_transform(ds, moved, spec, Backend::parallel).violation_count);
            // Q never grows under these kinds
            CHECK(cost_q(moved, cl) <= cost_q(ds, cl) * (1 + 1e-12));
        }
    }
}

TEST_CASE("euclidization on embedded data is zero") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset ds = Dataset::from_points(fixtures::random_embedding(6 + s, 3, s));
        CHECK(euclidization_delta(ds) <= 1e-9 * std::max(1.0, centered_gram_norm(ds)));
        CHECK(is_euclidean_embeddable(ds));
    }
}

TEST_CASE("euclidization of a triangle-violating triple") {
    const Dataset ds = Dataset::from_distances(PseudoDistanceMatrix(3, {1.0, 1.0, 3.0}));
    CHECK_FALSE(is_euclidean_embeddable(ds));
    const double lmin = centered_gram_min_eigenvalue(ds);
    CHECK(lmin == doctest::Approx(eigen_min_eigenvalue(ds)));
    const double delta = euclidization_delta(ds);
    CHECK(delta > 0.0);
    CHECK(delta == doctest::Approx(-2.0 * eigen_min_eigenvalue(ds)));
    for (double extra : {1.0, 1.001, 1.5, 3.0, 10.0}) {
        const Dataset moved = shifted(ds, delta * extra);
        CHECK(eigen_min_eigenvalue(moved) >= -1e-9 * centered_gram_norm(moved));
        CHECK(is_euclidean_embeddable(moved));
    }
}

TEST_CASE("euclidization on random pseudo-distances matches the Eigen oracle") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        const Dataset ds = fixtures::random_pseudo(4 + s % 10, 100 + s, 0.1, 5.0);
        CHECK(centered_gram_min_eigenvalue(ds) == doctest::Approx(eigen_min_eigenvalue(ds)).epsilon(1e-9).scale(1.0));
        const Dataset moved = shifted(ds, euclidization_delta(ds));
        CHECK(eigen_min_eigenvalue(moved) >= -1e-9 * centered_gram_norm(moved));
    }
}

TEST_CASE("transform names round-trip") {
    for (TransformKind k : {TransformKind::scale, TransformKind::consistency, TransformKind::relative_consistency,
                            TransformKind::lower_bounded_relative_consistency, TransformKind::delta_shift})
        CHECK(parse_transform_kind(transform_kind_name(k)) == k);
    CHECK_THROWS_AS(parse_transform_kind("shear"), Error);
}
