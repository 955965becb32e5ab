#include "widegaps/transforms.hpp"

#include <random>
#include <string>

#include "widegaps/kernels.hpp"
#include "widegaps/linalg.hpp"

namespace widegaps {

std::string_view transform_kind_name(TransformKind kind) noexcept {
    switch (kind) {
        case TransformKind::scale: return "scale";
        case TransformKind::consistency: return "consistency";
        case TransformKind::relative_consistency: return "relative_consistency";
        case TransformKind::lower_bounded_relative_consistency: return "lower_bounded_relative_consistency";
        case TransformKind::delta_shift: return "delta_shift";
    }
    return "scale";
}

TransformKind parse_transform_kind(std::string_view name) {
    for (auto k : {TransformKind::scale, TransformKind::consistency, TransformKind::relative_consistency,
                   TransformKind::lower_bounded_relative_consistency, TransformKind::delta_shift})
        if (transform_kind_name(k) == name) return k;
    throw Error(Errc::InvalidSpec, "unknown transform kind '" + std::string(name) + "'");
}

std::string_view clause_name(TransformClause clause) noexcept {
    switch (clause) {
        case TransformClause::scale_factor: return "d'=alpha*d";
        case TransformClause::delta_identity: return "d'^2=d^2+delta";
        case TransformClause::intra_not_longer: return "intra d'<=d";
        case TransformClause::inter_not_shorter: return "inter d'>=d";
        case TransformClause::order_preserved: return "intra order preserved";
        case TransformClause::ratio_not_larger: return "intra ratio not larger";
        case TransformClause::lower_bound: return "d'>=sigma(d)";
    }
    return "?";
}

TransformSpec TransformSpec::scale(double alpha) {
    TransformSpec s;
    s.kind = TransformKind::scale;
    s.alpha = alpha;
    return s;
}

TransformSpec TransformSpec::delta_shift(double delta) {
    TransformSpec s;
    s.kind = TransformKind::delta_shift;
    s.delta = delta;
    return s;
}

TransformSpec TransformSpec::consistency(TransformKind kind, Clustering clustering, double intra_factor,
                                         double inter_growth) {
    TransformSpec s;
    s.kind = kind;
    s.clustering = std::move(clustering);
    s.intra_factor = intra_factor;
    s.inter_growth = inter_growth;
    return s;
}

void TransformSpec::validate() const {
    auto fail = [&](const std::string& why) {
        throw Error(Errc::InvalidSpec, std::string(transform_kind_name(kind)) + ": " + why);
    };
    const bool uses_alpha = kind == TransformKind::scale;
    const bool uses_delta = kind == TransformKind::delta_shift;
    const bool uses_consistency = needs_clustering();
    if (alpha.has_value() != uses_alpha) fail(uses_alpha ? "alpha is required" : "alpha does not apply");
    if (delta.has_value() != uses_delta) fail(uses_delta ? "delta is required" : "delta does not apply");
    if (clustering.has_value() != uses_consistency)
        fail(uses_consistency ? "a clustering (labels) is required" : "a clustering does not apply");
    if (intra_factor.has_value() != uses_consistency)
        fail(uses_consistency ? "intra_factor is required" : "intra_factor does not apply");
    if (inter_growth.has_value() != uses_consistency)
        fail(uses_consistency ? "inter_growth is required" : "inter_growth does not apply");
    if (uses_alpha && !(*alpha > 0.0 && std::isfinite(*alpha))) fail("alpha must be a positive finite number");
    if (uses_delta && !(*delta >= 0.0 && std::isfinite(*delta))) fail("delta must be >= 0");
    if (uses_consistency) {
        if (!(*intra_factor > 0.0 && *intra_factor <= 1.0)) fail("intra_factor must lie in (0, 1]");
        if (!(*inter_growth >= 1.0 && std::isfinite(*inter_growth))) fail("inter_growth must be >= 1");
    }
}

namespace {

double uniform_between(std::mt19937_64& gen, double lo, double hi) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

}  // namespace

Dataset apply_transform(const Dataset& dataset, const TransformSpec& spec, std::uint64_t rng_seed) {
    spec.validate();
    if (spec.clustering) require_compatible(dataset, *spec.clustering);

    const auto& d = dataset.distances();
    const std::size_t n = dataset.size();
    std::vector<double> out(d.condensed().begin(), d.condensed().end());
    std::mt19937_64 gen(rng_seed);

    switch (spec.kind) {
        case TransformKind::scale: {
            for (double& v : out) v *= *spec.alpha;
            if (dataset.has_embedding()) {
                Embedding e = *dataset.embedding();
                for (double& c : e.coords) c *= *spec.alpha;
                return Dataset::from_points_and_distances(std::move(e), PseudoDistanceMatrix(n, std::move(out)));
            }
            return Dataset::from_distances(PseudoDistanceMatrix(n, std::move(out)));
        }
        case TransformKind::delta_shift: {
            for (double& v : out) v = std::sqrt(v * v + *spec.delta);
            return Dataset::from_distances(PseudoDistanceMatrix(n, std::move(out)));
        }
        default: break;
    }

    const Clustering& cl = *spec.clustering;
    const double lo = *spec.intra_factor;
    const double grow = *spec.inter_growth;
    const double floor = d.min_value();

    // Relative kinds shrink a whole block by one factor, which keeps order and ratios intact.
    std::vector<double> block_factor(static_cast<std::size_t>(cl.k()), 1.0);
    if (spec.kind != TransformKind::consistency)
        for (double& f : block_factor) f = uniform_between(gen, lo, 1.0);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = i + 1; l < n; ++l) {
            double& v = out[PseudoDistanceMatrix::flat_index(n, i, l)];
            if (cl.label(i) != cl.label(l)) {
                v *= uniform_between(gen, 1.0, grow);
                continue;
            }
            switch (spec.kind) {
                case TransformKind::consistency: v *= uniform_between(gen, lo, 1.0); break;
                case TransformKind::relative_consistency: v *= block_factor[static_cast<std::size_t>(cl.label(i))]; break;
                case TransformKind::lower_bounded_relative_consistency:
                    v = std::max(floor, v * block_factor[static_cast<std::size_t>(cl.label(i))]);
                    break;
                default: break;
            }
        }
    }
    return Dataset::from_distances(PseudoDistanceMatrix(n, std::move(out)));
}

TransformVerification verify_transform(const Dataset& before, const Dataset& after, const TransformSpec& spec,
                                       Backend backend) {
    if (before.size() != after.size())
        throw Error(Errc::SizeMismatch, "before has " + std::to_string(before.size()) + " points, after has " +
                                            std::to_string(after.size()));
    spec.validate();
    if (spec.clustering) require_compatible(before, *spec.clustering);

    TransformVerification res;
    auto flag = [&](TransformClause c, PointId i, PointId j, std::optional<PointId> l = std::nullopt) {
        ++res.violation_count;
        if (res.violations.size() < kViolationCap) res.violations.push_back({c, i, j, l});
    };

    const auto& d = before.distances();
    const auto& p = after.distances();
    const std::size_t n = before.size();
    const double sigma_before = d.min_value();

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = i + 1; l < n; ++l) {
            const double a = d(i, l);
            const double b = p(i, l);
            switch (spec.kind) {
                case TransformKind::scale:
                    if (!approx_equal(b, *spec.alpha * a)) flag(TransformClause::scale_factor, i, l);
                    break;
                case TransformKind::delta_shift:
                    if (!approx_equal(b * b, a * a + *spec.delta)) flag(TransformClause::delta_identity, i, l);
                    break;
                default: {
                    const bool same = spec.clustering->label(i) == spec.clustering->label(l);
                    if (same && !at_most(b, a)) flag(TransformClause::intra_not_longer, i, l);
                    if (!same && !at_most(a, b)) flag(TransformClause::inter_not_shorter, i, l);
                    if (spec.kind == TransformKind::lower_bounded_relative_consistency && !at_most(sigma_before, b))
                        flag(TransformClause::lower_bound, i, l);
                }
            }
        }
    }

    if (spec.kind == TransformKind::relative_consistency ||
        spec.kind == TransformKind::lower_bounded_relative_consistency) {
        const kernels::TripleScan scan =
            backend == Backend::serial ? kernels::serial::intra_triples(d, p, *spec.clustering, kViolationCap)
                                       : kernels::omp::intra_triples(d, p, *spec.clustering, kViolationCap);
        res.violation_count += scan.count;
        for (const auto& v : scan.violations) {
            if (res.violations.size() >= kViolationCap) break;
            res.violations.push_back(v);
        }
    }
    res.ok = res.violation_count == 0;
    return res;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> centered_gram(const Dataset& dataset) {
    const std::size_t n = dataset.size();
    std::vector<double> b = dataset.distances().squared_square();
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_mean[i] += b[i * n + j];
        grand += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i * n + j] = -0.5 * (b[i * n + j] - row_mean[i] - row_mean[j] + grand);
    return b;
}

}  // namespace

double centered_gram_min_eigenvalue(const Dataset& dataset) {
    const auto eig = linalg::jacobi_eigenvalues(centered_gram(dataset), dataset.size());
    return *std::min_element(eig.begin(), eig.end());
}

double centered_gram_norm(const Dataset& dataset) {
    double s = 0.0;
    for (double v : centered_gram(dataset)) s += v * v;
    return std::sqrt(s);
}

double euclidization_delta(const Dataset& dataset) {
    return std::max(0.0, -2.0 * centered_gram_min_eigenvalue(dataset));
}

bool is_euclidean_embeddable(const Dataset& dataset, double rel_tol) {
    const double norm = centered_gram_norm(dataset);
    return centered_gram_min_eigenvalue(dataset) >= -rel_tol * std::max(norm, kAbsTol);
}

}  // namespace widegaps
