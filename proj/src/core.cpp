#include "widegaps/core.hpp"

#include <limits>
#include <string>

#include "widegaps/kernels.hpp"

namespace widegaps {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::DuplicatePoint: return "DuplicatePoint";
        case Errc::AsymmetricInput: return "AsymmetricInput";
        case Errc::NegativeDistance: return "NegativeDistance";
        case Errc::TooSmall: return "TooSmall";
        case Errc::InvalidClustering: return "InvalidClustering";
        case Errc::KTooSmall: return "KTooSmall";
        case Errc::NegativeBeta: return "NegativeBeta";
        case Errc::KOutOfRange: return "KOutOfRange";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::SizeMismatch: return "SizeMismatch";
        case Errc::ConfigInvalid: return "ConfigInvalid";
        case Errc::ResidualUndefined: return "ResidualUndefined";
        case Errc::RangePlantFailed: return "RangePlantFailed";
        case Errc::TooLarge: return "TooLarge";
        case Errc::InvalidArgs: return "InvalidArgs";
        case Errc::ParseError: return "ParseError";
        case Errc::InvariantBreach: return "InvariantBreach";
    }
    return "Unknown";
}

namespace {

void require_min_size(std::size_t n) {
    if (n < 2) throw Error(Errc::TooSmall, "a dataset needs at least 2 points, got " + std::to_string(n));
}

void require_positive(std::size_t n, std::span<const double> condensed) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = i + 1; l < n; ++l) {
            const double v = condensed[PseudoDistanceMatrix::flat_index(n, i, l)];
            if (!std::isfinite(v))
                throw Error(Errc::InvalidArgs, "non-finite distance at (" + std::to_string(i) + "," + std::to_string(l) + ")");
            if (v < 0.0)
                throw Error(Errc::NegativeDistance, "d(" + std::to_string(i) + "," + std::to_string(l) + ") < 0");
            if (v == 0.0)
                throw Error(Errc::DuplicatePoint,
                            "points " + std::to_string(i) + " and " + std::to_string(l) + " coincide");
        }
    }
}

}  // namespace

PseudoDistanceMatrix::PseudoDistanceMatrix(std::size_t n, std::vector<double> condensed)
    : n_(n), values_(std::move(condensed)) {
    require_min_size(n_);
    if (values_.size() != condensed_size(n_))
        throw Error(Errc::SizeMismatch, "condensed storage for n=" + std::to_string(n_) + " needs " +
                                            std::to_string(condensed_size(n_)) + " values");
    require_positive(n_, values_);
}

double PseudoDistanceMatrix::min_value() const noexcept {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::min(m, v);
    return m;
}

std::vector<double> PseudoDistanceMatrix::squared_square() const {
    std::vector<double> out(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t l = i + 1; l < n_; ++l) {
            const double s = squared(i, l);
            out[i * n_ + l] = s;
            out[l * n_ + i] = s;
        }
    return out;
}

Dataset Dataset::from_points(Embedding embedding) {
    require_min_size(embedding.n);
    if (embedding.dim == 0) throw Error(Errc::InvalidArgs, "embedding dimension must be >= 1");
    if (embedding.coords.size() != embedding.n * embedding.dim)
        throw Error(Errc::SizeMismatch, "coordinate table is not n x dim");
    for (double c : embedding.coords)
        if (!std::isfinite(c)) throw Error(Errc::InvalidArgs, "non-finite coordinate");
    auto condensed = kernels::omp::pairwise_distances(embedding);
    PseudoDistanceMatrix d(embedding.n, std::move(condensed));
    return Dataset(std::move(d), std::move(embedding));
}

Dataset Dataset::from_square(std::span<const double> square, std::size_t n) {
    require_min_size(n);
    if (square.size() != n * n) throw Error(Errc::SizeMismatch, "matrix is not n x n");
    std::vector<double> condensed(PseudoDistanceMatrix::condensed_size(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (square[i * n + i] != 0.0)
            throw Error(Errc::InvalidArgs, "diagonal entry " + std::to_string(i) + " is not zero");
        for (std::size_t l = i + 1; l < n; ++l) {
            const double a = square[i * n + l];
            const double b = square[l * n + i];
            if (!approx_equal(a, b))
                throw Error(Errc::AsymmetricInput,
                            "d(" + std::to_string(i) + "," + std::to_string(l) + ") != d(" + std::to_string(l) + "," +
                                std::to_string(i) + ")");
            condensed[PseudoDistanceMatrix::flat_index(n, i, l)] = a;
        }
    }
    return Dataset(PseudoDistanceMatrix(n, std::move(condensed)), std::nullopt);
}

Dataset Dataset::from_distances(PseudoDistanceMatrix distances) {
    require_min_size(distances.size());
    return Dataset(std::move(distances), std::nullopt);
}

Dataset Dataset::from_points_and_distances(Embedding embedding, PseudoDistanceMatrix distances) {
    Dataset derived = from_points(std::move(embedding));
    if (derived.size() != distances.size()) throw Error(Errc::SizeMismatch, "embedding and matrix sizes differ");
    const auto a = derived.distances().condensed();
    const auto b = distances.condensed();
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (std::abs(a[t] - b[t]) > kRelTol * std::max(1.0, std::abs(a[t])))
            throw Error(Errc::InvariantBreach, "distance matrix disagrees with the embedding");
    }
    return Dataset(std::move(distances), std::move(derived.embedding_));
}

Dataset Dataset::subset(std::span<const PointId> ids) const {
    const std::size_t m = ids.size();
    require_min_size(m);
    std::vector<double> condensed(PseudoDistanceMatrix::condensed_size(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            condensed[PseudoDistanceMatrix::flat_index(m, a, b)] = distances_(ids[a], ids[b]);
    std::optional<Embedding> e;
    if (embedding_) {
        Embedding sub{m, embedding_->dim, {}};
        sub.coords.reserve(m * sub.dim);
        for (PointId id : ids) {
            auto r = embedding_->row(id);
            sub.coords.insert(sub.coords.end(), r.begin(), r.end());
        }
        e = std::move(sub);
    }
    return Dataset(PseudoDistanceMatrix(m, std::move(condensed)), std::move(e));
}


Dataset validate_dataset(const RawInput& raw) {
    if (raw.dim > 0) {
        return Dataset::from_points(Embedding{raw.n, raw.dim, raw.values});
    }
    return Dataset::from_square(raw.values, raw.n);
}

// ---------------------------------------------------------------------------

Clustering::Clustering(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
    if (k_ < 1) throw Error(Errc::InvalidClustering, "k must be >= 1");
    std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
    for (int lab : labels_) {
        if (lab < 0 || lab >= k_)
            throw Error(Errc::InvalidClustering, "label " + std::to_string(lab) + " outside 0.." + std::to_string(k_ - 1));
        ++counts[static_cast<std::size_t>(lab)];
    }
    for (std::size_t b = 0; b < counts.size(); ++b) {
        if (counts[b] < 2)
            throw Error(Errc::InvalidClustering,
                        "block " + std::to_string(b) + " has " + std::to_string(counts[b]) + " member(s), need >= 2");
    }
}

Clustering Clustering::from_labels(std::vector<int> labels) {
    int k = 0;
    for (int lab : labels) k = std::max(k, lab + 1);
    return Clustering(std::move(labels), k);
}

Clustering Clustering::single_block(std::size_t n) { return Clustering(std::vector<int>(n, 0), 1); }

std::vector<std::vector<PointId>> Clustering::blocks() const {
    std::vector<std::vector<PointId>> out(static_cast<std::size_t>(k_));
    for (std::size_t i = 0; i < labels_.size(); ++i) out[static_cast<std::size_t>(labels_[i])].push_back(i);
    return out;
}

std::vector<std::size_t> Clustering::block_sizes() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(k_), 0);
    for (int lab : labels_) ++out[static_cast<std::size_t>(lab)];
    return out;
}

Clustering Clustering::canonical() const {
    std::vector<int> remap(static_cast<std::size_t>(k_), -1);
    std::vector<int> out(labels_.size());
    int next = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        int& r = remap[static_cast<std::size_t>(labels_[i])];
        if (r < 0) r = next++;
        out[i] = r;
    }
    return Clustering(std::move(out), k_);
}

bool Clustering::same_partition(const Clustering& other) const {
    if (k_ != other.k_ || labels_.size() != other.labels_.size()) return false;
    return canonical().labels_ == other.canonical().labels_;
}

void require_compatible(const Dataset& dataset, const Clustering& clustering) {
    if (clustering.size() != dataset.size())
        throw Error(Errc::InvalidClustering, "clustering has " + std::to_string(clustering.size()) +
                                                 " labels for " + std::to_string(dataset.size()) + " points");
}

// ---------------------------------------------------------------------------

double cost_q(const Dataset& dataset, const Clustering& clustering) {
    require_compatible(dataset, clustering);
    const auto& d = dataset.distances();
    double q = 0.0;
    for (const auto& block : clustering.blocks()) {
        double s = 0.0;
        for (std::size_t a = 0; a < block.size(); ++a)
            for (std::size_t b = a + 1; b < block.size(); ++b) s += d.squared(block[a], block[b]);
        // Unordered pairs counted once: 2s / (2|C|).
        q += s / static_cast<double>(block.size());
    }
    return q;
}

double cost_q_centroid(const Dataset& dataset, const Clustering& clustering) {
    require_compatible(dataset, clustering);
    if (!dataset.has_embedding()) throw Error(Errc::InvalidArgs, "centroid cost needs an embedding");
    const Embedding& e = *dataset.embedding();
    double q = 0.0;
    for (const auto& block : clustering.blocks()) {
        std::vector<double> mu(e.dim, 0.0);
        for (PointId i : block) {
            auto r = e.row(i);
            for (std::size_t c = 0; c < e.dim; ++c) mu[c] += r[c];
        }
        for (double& m : mu) m /= static_cast<double>(block.size());
        for (PointId i : block) {
            auto r = e.row(i);
            for (std::size_t c = 0; c < e.dim; ++c) q += (r[c] - mu[c]) * (r[c] - mu[c]);
        }
    }
    return q;
}

double sigma(const Dataset& dataset) { return dataset.distances().min_value(); }

double q_lower_bound(const Dataset& dataset, int k) {
    const double s = sigma(dataset);
    return static_cast<double>(static_cast<long long>(dataset.size()) - k) * s * s / 2.0;
}

double beta(const Dataset& dataset, const Clustering& clustering) {
    const double q = cost_q(dataset, clustering);
    const double s = sigma(dataset);
    const double n_k_1 = static_cast<double>(static_cast<long long>(dataset.size()) - clustering.k() - 1);
    return 2.0 * (q - n_k_1 * s * s / 2.0);
}

double min_inter_distance(const Dataset& dataset, const Clustering& clustering) {
    require_compatible(dataset, clustering);
    const auto& d = dataset.distances();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dataset.size(); ++i)
        for (std::size_t l = i + 1; l < dataset.size(); ++l)
            if (clustering.label(i) != clustering.label(l)) m = std::min(m, d(i, l));
    return m;
}

CostReport cost_report(const Dataset& dataset, const Clustering& clustering) {
    CostReport r;
    r.q = cost_q(dataset, clustering);
    r.sigma = sigma(dataset);
    r.beta = beta(dataset, clustering);
    r.variational_threshold = std::sqrt(2.0) * std::sqrt(r.q);
    if (r.beta >= 0.0) r.residual_threshold = std::sqrt(r.beta);
    r.min_inter = min_inter_distance(dataset, clustering);
    r.n = dataset.size();
    r.k = clustering.k();
    return r;
}

}  // namespace widegaps
