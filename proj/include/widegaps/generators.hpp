#ifndef WIDEGAPS_GENERATORS_HPP
#define WIDEGAPS_GENERATORS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "widegaps/core.hpp"
#include "widegaps/separability.hpp"

namespace widegaps {

enum class BlockShape {
    gaussian,     // isotropic Gaussian of scale intra_spread
    fixed_pair,   // exactly two points at distance intra_spread (sizes must all be 2)
    split_blobs,  // two Gaussian halves pushed apart by split_gap * intra_spread (adversarial)
};

struct GeneratorConfig {
    int k = 2;
    std::vector<int> sizes{2, 2};
    int dim = 2;
    double intra_spread = 1.0;
    double gap_margin = 2.0;
    Separation kind = Separation::variational;
    std::uint64_t rng_seed = 0;
    BlockShape shape = BlockShape::gaussian;
    double split_gap = 0.0;

    /// Throws ConfigInvalid.
    void validate() const;
};

struct PlantedData {
    Dataset dataset;
    Clustering planted;
};

inline constexpr int kMaxResamples = 100;

/// Blocks sampled around the origin, then translated onto a regular simplex whose edge is
/// gap_margin * threshold + 2 * max block radius. Points are laid out block by block.
PlantedData generate_clusterable(const GeneratorConfig& config);

/// As generate_clusterable, resampling until no block is k'-separable for k' in 2..K+1.
PlantedData generate_range_clusterable(const GeneratorConfig& config, int K);

/// A dataset on which discover_range(k_x = target.k()) returns exactly `target`.
Dataset richness_witness(const Clustering& target, Separation kind, std::uint64_t rng_seed = 0);

/// Same, from raw labels; a block with fewer than two members is ConfigInvalid.
Dataset richness_witness(std::span<const int> target_labels, Separation kind, std::uint64_t rng_seed = 0);

/// Single isotropic Gaussian blob of n points (no planted structure).
Dataset gaussian_blob(std::size_t n, int dim, double spread, std::uint64_t rng_seed);

}  // namespace widegaps

#endif
