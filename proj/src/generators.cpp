#include "widegaps/generators.hpp"

#include <limits>
#include <random>
#include <string>

#include "widegaps/clusterers.hpp"

namespace widegaps {

namespace {

[[noreturn]] void config_error(const std::string& why) { throw Error(Errc::ConfigInvalid, why); }

using Block = std::vector<std::vector<double>>;

void center(Block& block) {
    if (block.empty()) return;
    std::vector<double> mu(block.front().size(), 0.0);
    for (const auto& p : block)
        for (std::size_t c = 0; c < p.size(); ++c) mu[c] += p[c];
    for (double& m : mu) m /= static_cast<double>(block.size());
    for (auto& p : block)
        for (std::size_t c = 0; c < p.size(); ++c) p[c] -= mu[c];
}

double radius(const Block& block) {
    double r = 0.0;
    for (const auto& p : block) {
        double s = 0.0;
        for (double v : p) s += v * v;
        r = std::max(r, std::sqrt(s));
    }
    return r;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    return s;
}

Block sample_block(const GeneratorConfig& cfg, int size, std::size_t dim, std::mt19937_64& gen) {
    std::normal_distribution<double> normal(0.0, cfg.intra_spread);
    Block block(static_cast<std::size_t>(size), std::vector<double>(dim, 0.0));
    switch (cfg.shape) {
        case BlockShape::fixed_pair: {
            // random orientation, so no pair lines up with a simplex edge
            double norm = 0.0;
            while (!(norm > 1e-6)) {
                norm = 0.0;
                for (double& v : block[0]) {
                    v = normal(gen);
                    norm += v * v;
                }
                norm = std::sqrt(norm);
            }
            for (std::size_t t = 0; t < dim; ++t) {
                block[0][t] *= cfg.intra_spread / (2.0 * norm);
                block[1][t] = -block[0][t];
            }
            return block;
        }
        case BlockShape::gaussian:
        case BlockShape::split_blobs:
            for (auto& p : block)
                for (double& v : p) v = normal(gen);
            if (cfg.shape == BlockShape::split_blobs) {
                const double shift = cfg.split_gap * cfg.intra_spread / 2.0;
                for (std::size_t i = 0; i < block.size(); ++i) block[i][0] += i < block.size() / 2 ? shift : -shift;
            }
            center(block);
            return block;
    }
    return block;
}

// Vertex j of a regular simplex with unit-sqrt(2) edges in k-1 coordinates.
std::vector<double> simplex_vertex(int j, int k, std::size_t dim) {
    std::vector<double> v(dim, 0.0);
    if (j < k - 1) {
        v[static_cast<std::size_t>(j)] = 1.0;
    } else {
        const double c = (1.0 - std::sqrt(static_cast<double>(k))) / static_cast<double>(k - 1);
        for (int t = 0; t < k - 1; ++t) v[static_cast<std::size_t>(t)] = c;
    }
    return v;
}

}  // namespace

void GeneratorConfig::validate() const {
    if (k < 2) config_error("k must be >= 2 for a planted separation, got " + std::to_string(k));
    if (static_cast<int>(sizes.size()) != k) config_error("sizes has " + std::to_string(sizes.size()) + " entries for k=" + std::to_string(k));
    for (int s : sizes)
        if (s < 2) config_error("every block needs at least 2 points, got " + std::to_string(s));
    if (dim < 1) config_error("dim must be >= 1");
    if (!(intra_spread > 0.0 && std::isfinite(intra_spread))) config_error("intra_spread must be positive");
    if (!(gap_margin > 1.0 && std::isfinite(gap_margin))) config_error("gap_margin must exceed 1");
    if (shape == BlockShape::fixed_pair)
        for (int s : sizes)
            if (s != 2) config_error("fixed_pair blocks must have exactly 2 points");
    if (shape == BlockShape::split_blobs && !(split_gap >= 0.0)) config_error("split_gap must be >= 0");
}

PlantedData generate_clusterable(const GeneratorConfig& config) {
    config.validate();
    const int k = config.k;
    const std::size_t dim = static_cast<std::size_t>(std::max(config.dim, k - 1));

    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        std::mt19937_64 gen(attempt == 0 ? config.rng_seed : derive_seed(config.rng_seed, 0x9e5a, static_cast<std::uint64_t>(attempt)));
        std::vector<Block> blocks;
        for (int s : config.sizes) blocks.push_back(sample_block(config, s, dim, gen));

        // Q and sigma depend only on the intra-block geometry, which translation leaves alone.
        double q = 0.0;
        double sigma_sq = std::numeric_limits<double>::infinity();
        double max_radius = 0.0;
        std::size_t n = 0;
        for (const auto& b : blocks) {
            double s = 0.0;
            for (std::size_t i = 0; i < b.size(); ++i)
                for (std::size_t l = i + 1; l < b.size(); ++l) {
                    const double v = sq_dist(b[i], b[l]);
                    s += v;
                    sigma_sq = std::min(sigma_sq, v);
                }
            q += s / static_cast<double>(b.size());
            max_radius = std::max(max_radius, radius(b));
            n += b.size();
        }
        if (!(sigma_sq > 0.0)) continue;

        double threshold = std::sqrt(2.0 * q);
        if (config.kind == Separation::residual) {
            const double beta_value = 2.0 * q - static_cast<double>(static_cast<long long>(n) - k - 1) * sigma_sq;
            if (beta_value < 0.0) continue;
            threshold = std::sqrt(beta_value);
        }

        const double edge = config.gap_margin * threshold + 2.0 * max_radius;
        const double unit = edge / std::sqrt(2.0);
        Embedding e{n, dim, {}};
        e.coords.reserve(n * dim);
        std::vector<int> labels;
        labels.reserve(n);
        for (int b = 0; b < k; ++b) {
            const auto vertex = simplex_vertex(b, k, dim);
            for (const auto& p : blocks[static_cast<std::size_t>(b)]) {
                for (std::size_t c = 0; c < dim; ++c) e.coords.push_back(vertex[c] * unit + p[c]);
                labels.push_back(b);
            }
        }
        PlantedData out{Dataset::from_points(std::move(e)), Clustering(std::move(labels), k)};
        if (!check_separation(out.dataset, out.planted, config.kind).separable)
            throw Error(Errc::InvariantBreach, "generated data failed its own separability check");
        return out;
    }
    throw Error(Errc::ResidualUndefined, "no sample with a usable threshold after " + std::to_string(kMaxResamples) +
                                             " attempts");
}

PlantedData generate_range_clusterable(const GeneratorConfig& config, int K) {
    if (K < 2) config_error("range generation needs K >= 2, got " + std::to_string(K));
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        GeneratorConfig cfg = config;
        if (attempt > 0) cfg.rng_seed = derive_seed(config.rng_seed, 0x4b52, static_cast<std::uint64_t>(attempt));
        PlantedData data = generate_clusterable(cfg);
        const auto report = check_range(data.dataset, data.planted, config.kind, K, RangeCheckOptions{cfg.rng_seed, 8});
        if (report.separable) return data;
    }
    throw Error(Errc::RangePlantFailed, "every one of " + std::to_string(kMaxResamples) +
                                            " samples had a sub-separable block");
}

Dataset gaussian_blob(std::size_t n, int dim, double spread, std::uint64_t rng_seed) {
    if (n < 2 || dim < 1 || !(spread > 0.0)) config_error("blob needs n >= 2, dim >= 1, spread > 0");
    std::mt19937_64 gen(rng_seed);
    std::normal_distribution<double> normal(0.0, spread);
    Embedding e{n, static_cast<std::size_t>(dim), std::vector<double>(n * static_cast<std::size_t>(dim))};
    for (double& v : e.coords) v = normal(gen);
    return Dataset::from_points(std::move(e));
}

Dataset richness_witness(const Clustering& target, Separation kind, std::uint64_t rng_seed) {
    if (target.k() == 1) return gaussian_blob(target.size(), 2, 1.0, rng_seed);

    GeneratorConfig cfg;
    cfg.k = target.k();
    cfg.sizes.clear();
    for (std::size_t s : target.block_sizes()) cfg.sizes.push_back(static_cast<int>(s));
    cfg.dim = 2;
    cfg.intra_spread = 1.0;
    cfg.gap_margin = 4.0;
    cfg.kind = kind;
    cfg.rng_seed = rng_seed;
    const PlantedData planted = generate_clusterable(cfg);

    // Generated points are laid out block by block; route them to the target's point ids.
    const Embedding& src = *planted.dataset.embedding();
    Embedding e{src.n, src.dim, std::vector<double>(src.coords.size())};
    std::size_t next = 0;
    for (const auto& block : target.blocks())
        for (PointId id : block) {
            const auto row = src.row(next++);
            std::copy(row.begin(), row.end(), e.coords.begin() + static_cast<std::ptrdiff_t>(id * src.dim));
        }
    return Dataset::from_points(std::move(e));
}

Dataset richness_witness(std::span<const int> target_labels, Separation kind, std::uint64_t rng_seed) {
    std::optional<Clustering> target;
    try {
        target = Clustering::from_labels(std::vector<int>(target_labels.begin(), target_labels.end()));
    } catch (const Error& e) {
        throw Error(Errc::ConfigInvalid, e.what());
    }
    return richness_witness(*target, kind, rng_seed);
}

}  // namespace widegaps
