#ifndef WIDEGAPS_TRANSFORMS_HPP
#define WIDEGAPS_TRANSFORMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "widegaps/core.hpp"
#include "widegaps/exec.hpp"

namespace widegaps {

enum class TransformKind { scale, consistency, relative_consistency, lower_bounded_relative_consistency, delta_shift };

std::string_view transform_kind_name(TransformKind kind) noexcept;
TransformKind parse_transform_kind(std::string_view name);

/// Declarative distance transform. Only the parameters the kind needs may be set.
struct TransformSpec {
    TransformKind kind = TransformKind::scale;
    std::optional<double> alpha;         // scale
    std::optional<double> intra_factor;  // consistency kinds, lower end of the shrink range, in (0,1]
    std::optional<double> inter_growth;  // consistency kinds, upper end of the multiplicative growth range, >= 1
    std::optional<double> delta;         // delta_shift, added to every squared distance
    std::optional<Clustering> clustering;

    static TransformSpec scale(double alpha);
    static TransformSpec delta_shift(double delta);
    static TransformSpec consistency(TransformKind kind, Clustering clustering, double intra_factor,
                                     double inter_growth);

    /// Throws InvalidSpec when parameters do not match the kind.
    void validate() const;

    bool needs_clustering() const noexcept {
        return kind != TransformKind::scale && kind != TransformKind::delta_shift;
    }
};

/// Draws a distance matrix satisfying the kind's constraints relative to `dataset`.
/// Embeddings survive only the scale kind.
Dataset apply_transform(const Dataset& dataset, const TransformSpec& spec, std::uint64_t rng_seed);

enum class TransformClause {
    scale_factor,       // d' = alpha d
    delta_identity,     // d'^2 = d^2 + delta
    intra_not_longer,   // d' <= d inside a block
    inter_not_shorter,  // d' >= d across blocks
    order_preserved,    // d(i,j) <= d(i,l)  =>  d'(i,j) <= d'(i,l)
    ratio_not_larger,   // d(i,j) <= d(i,l)  =>  d'(i,l)/d'(i,j) <= d(i,l)/d(i,j)
    lower_bound,        // d' >= sigma(before)
};

std::string_view clause_name(TransformClause clause) noexcept;

struct TransformViolation {
    TransformClause clause;
    PointId i = 0;
    PointId j = 0;
    std::optional<PointId> l;  // set for triple clauses
};

struct TransformVerification {
    bool ok = true;
    std::size_t violation_count = 0;
    std::vector<TransformViolation> violations;  // first kViolationCap only
};

inline constexpr std::size_t kViolationCap = 1000;

TransformVerification verify_transform(const Dataset& before, const Dataset& after, const TransformSpec& spec,
                                       Backend backend = Backend::parallel);

/// Smallest eigenvalue of B = -1/2 J D^2 J.
double centered_gram_min_eigenvalue(const Dataset& dataset);

/// Frobenius norm of the centered Gram matrix B.
double centered_gram_norm(const Dataset& dataset);

/// Minimal constant that, added to every squared distance, makes the matrix Euclidean: max(0, -2 lambda_min).
double euclidization_delta(const Dataset& dataset);

/// All eigenvalues of B at least -rel_tol * ||B||.
bool is_euclidean_embeddable(const Dataset& dataset, double rel_tol = 1e-9);

}  // namespace widegaps

#endif
