#ifndef WIDEGAPS_CORE_HPP
#define WIDEGAPS_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "widegaps/error.hpp"

namespace widegaps {

using PointId = std::size_t;

// Relative tolerance with an absolute floor, shared by every threshold test.
inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

inline double tolerance_for(double a, double b) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::max(kAbsTol, kRelTol * scale);
}

/// a > b strictly, with ties inside the tolerance band counted as "not greater".
inline bool strictly_greater(double a, double b) noexcept { return a > b + tolerance_for(a, b); }

/// a <= b allowing fp slack.
inline bool at_most(double a, double b) noexcept { return a <= b + tolerance_for(a, b); }

inline bool approx_equal(double a, double b) noexcept { return std::abs(a - b) <= tolerance_for(a, b); }

/// Symmetric dissimilarity with zero diagonal, stored as the condensed upper
/// triangle. Pair (i,l) with i<l lives at i*n - i*(i+1)/2 + (l-i-1).
class PseudoDistanceMatrix {
public:
    PseudoDistanceMatrix() = default;

    /// Takes ownership of condensed values; checks count and positivity.
    PseudoDistanceMatrix(std::size_t n, std::vector<double> condensed);

    static std::size_t condensed_size(std::size_t n) noexcept { return n * (n - 1) / 2; }

    static std::size_t flat_index(std::size_t n, std::size_t i, std::size_t l) noexcept {
        if (i > l) std::swap(i, l);
        return i * n - i * (i + 1) / 2 + (l - i - 1);
    }

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t l) const noexcept {
        return i == l ? 0.0 : values_[flat_index(n_, i, l)];
    }

    double squared(std::size_t i, std::size_t l) const noexcept {
        const double d = (*this)(i, l);
        return d * d;
    }

    std::span<const double> condensed() const noexcept { return values_; }

    double min_value() const noexcept;

    /// Square copy of the squared distances, row-major n*n.
    std::vector<double> squared_square() const;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

/// Row-major n x dim coordinates.
struct Embedding {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> coords;

    std::span<const double> row(std::size_t i) const noexcept { return {coords.data() + i * dim, dim}; }
};

class Dataset {
public:
    /// Validates the coordinates and derives pairwise Euclidean distances.
    static Dataset from_points(Embedding embedding);

    /// Validates a full square matrix (symmetry, zero diagonal, sign, duplicates).
    static Dataset from_square(std::span<const double> square, std::size_t n);

    /// Trusts symmetry (structural) but still checks positivity and n >= 2.
    static Dataset from_distances(PseudoDistanceMatrix distances);

    /// Both representations; throws InvariantBreach if they disagree beyond 1e-9 relative.
    static Dataset from_points_and_distances(Embedding embedding, PseudoDistanceMatrix distances);

    std::size_t size() const noexcept { return distances_.size(); }
    const PseudoDistanceMatrix& distances() const noexcept { return distances_; }
    const std::optional<Embedding>& embedding() const noexcept { return embedding_; }
    bool has_embedding() const noexcept { return embedding_.has_value(); }

    /// Restriction to `ids`, re-indexed 0..ids.size()-1 in the given order.
    Dataset subset(std::span<const PointId> ids) const;

private:
    Dataset(PseudoDistanceMatrix d, std::optional<Embedding> e)
        : distances_(std::move(d)), embedding_(std::move(e)) {}

    PseudoDistanceMatrix distances_;
    std::optional<Embedding> embedding_;
};

/// Partition stored as labels 0..k-1. Every block has at least two members.
class Clustering {
public:
    Clustering(std::vector<int> labels, int k);

    /// k inferred as max(label)+1.
    static Clustering from_labels(std::vector<int> labels);

    static Clustering single_block(std::size_t n);

    int k() const noexcept { return k_; }
    std::size_t size() const noexcept { return labels_.size(); }
    int label(std::size_t i) const noexcept { return labels_[i]; }
    std::span<const int> labels() const noexcept { return labels_; }

    std::vector<std::vector<PointId>> blocks() const;
    std::vector<std::size_t> block_sizes() const;

    /// Relabelled so block ids appear in order of first occurrence.
    Clustering canonical() const;

    /// Same partition regardless of block numbering.
    bool same_partition(const Clustering& other) const;

    bool operator==(const Clustering& other) const = default;

private:
    std::vector<int> labels_;
    int k_;
};

/// Throws InvalidClustering unless `clustering` partitions `dataset` validly.
void require_compatible(const Dataset& dataset, const Clustering& clustering);

struct CostReport {
    double q = 0.0;
    double sigma = 0.0;
    double beta = 0.0;
    double variational_threshold = 0.0;
    std::optional<double> residual_threshold;
    double min_inter = 0.0;  // +inf when k == 1
    std::size_t n = 0;
    int k = 0;
};

/// Raw input accepted by validate_dataset: either coordinates or a square matrix.
struct RawInput {
    std::size_t n = 0;
    std::size_t dim = 0;                 // > 0 means `values` are n x dim coordinates
    std::vector<double> values;          // otherwise an n x n matrix
};

Dataset validate_dataset(const RawInput& raw);

/// Pairwise form: sum over blocks of (1/(2|C|)) sum_{i,l in C} d(i,l)^2.
double cost_q(const Dataset& dataset, const Clustering& clustering);

/// Centroid form; requires an embedding.
double cost_q_centroid(const Dataset& dataset, const Clustering& clustering);

double sigma(const Dataset& dataset);

/// 2 * (Q - (n-k-1) * sigma^2 / 2).
double beta(const Dataset& dataset, const Clustering& clustering);

/// (n-k) * sigma^2 / 2, the floor every valid clustering's Q sits on.
double q_lower_bound(const Dataset& dataset, int k);

/// Smallest distance between points of different blocks, +inf for k == 1.
double min_inter_distance(const Dataset& dataset, const Clustering& clustering);

CostReport cost_report(const Dataset& dataset, const Clustering& clustering);

}  // namespace widegaps

#endif
