#ifndef WIDEGAPS_SEPARABILITY_HPP
#define WIDEGAPS_SEPARABILITY_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "widegaps/core.hpp"

namespace widegaps {

/// Which gap criterion: sqrt(2Q) (variational) or sqrt(beta) (residual).
enum class Separation { variational, residual };

std::string_view separation_name(Separation kind) noexcept;
Separation parse_separation(std::string_view name);

/// How sub-separations inside blocks were searched during a range check.
enum class SubSearch { none, exhaustive, heuristic, mixed };

std::string_view sub_search_name(SubSearch s) noexcept;

struct SeparabilityReport {
    Separation kind = Separation::variational;
    bool separable = false;
    double threshold = 0.0;
    double min_inter = 0.0;
    std::optional<std::pair<PointId, PointId>> witness_pair;
    std::optional<int> level;
    SubSearch sub_search = SubSearch::none;
    // Range checks only: the block (by label) found sub-separable and at which k'. The witness
    // pair then straddles that sub-separation.
    std::optional<int> sub_separable_block;
    std::optional<int> sub_separable_k;
};

/// Every inter-block pair must exceed sqrt(2) * sqrt(Q).
SeparabilityReport check_variational(const Dataset& dataset, const Clustering& clustering);

/// Every inter-block pair must exceed sqrt(beta). Throws NegativeBeta if beta < 0.
SeparabilityReport check_residual(const Dataset& dataset, const Clustering& clustering);

SeparabilityReport check_separation(const Dataset& dataset, const Clustering& clustering, Separation kind);

/// Blocks up to this size are searched exhaustively for sub-separations.
inline constexpr std::size_t kExhaustiveBlockLimit = 12;

struct RangeCheckOptions {
    std::uint64_t rng_seed = 0;  // heuristic search for large blocks
    int restarts = 8;
};

/// k-separation of the given kind whose blocks admit no k'-separation for k' in 2..K+1.
/// On success `level` is k.
SeparabilityReport check_range(const Dataset& dataset, const Clustering& clustering, Separation kind, int K,
                               const RangeCheckOptions& options = {});

/// A k'-separation of `kind` of `block` (as its own dataset) for the smallest k' in 2..k_max, if any.
std::optional<Clustering> find_sub_separation(const Dataset& block, Separation kind, int k_max, const RangeCheckOptions& options,
                                       SubSearch* used = nullptr);

}  // namespace widegaps

#endif
