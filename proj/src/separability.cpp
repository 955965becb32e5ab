#include "widegaps/separability.hpp"

#include <limits>
#include <string>

#include "widegaps/clusterers.hpp"
#include "widegaps/oracle.hpp"

namespace widegaps {

std::string_view separation_name(Separation kind) noexcept {
    return kind == Separation::residual ? "residual" : "variational";
}

Separation parse_separation(std::string_view name) {
    if (name == "variational") return Separation::variational;
    if (name == "residual") return Separation::residual;
    throw Error(Errc::InvalidArgs, "unknown separation kind '" + std::string(name) + "'");
}

std::string_view sub_search_name(SubSearch s) noexcept {
    switch (s) {
        case SubSearch::none: return "none";
        case SubSearch::exhaustive: return "exhaustive";
        case SubSearch::heuristic: return "heuristic";
        case SubSearch::mixed: return "mixed";
    }
    return "none";
}

namespace {

void require_k_at_least_two(const Clustering& clustering) {
    if (clustering.k() < 2)
        throw Error(Errc::KTooSmall, "separability needs k >= 2, got k=" + std::to_string(clustering.k()));
}

// Fills min_inter, separable and (on failure) the closest inter-block pair.
void judge_gap(const Dataset& dataset, const Clustering& clustering, SeparabilityReport& report) {
    const auto& d = dataset.distances();
    double best = std::numeric_limits<double>::infinity();
    std::pair<PointId, PointId> arg{0, 0};
    for (std::size_t i = 0; i < dataset.size(); ++i)
        for (std::size_t l = i + 1; l < dataset.size(); ++l) {
            if (clustering.label(i) == clustering.label(l)) continue;
            const double v = d(i, l);
            if (v < best) {
                best = v;
                arg = {i, l};
            }
        }
    report.min_inter = best;
    report.separable = strictly_greater(best, report.threshold);
    if (!report.separable) report.witness_pair = arg;
}

SubSearch merge(SubSearch a, SubSearch b) {
    if (a == SubSearch::none) return b;
    if (b == SubSearch::none || a == b) return a;
    return SubSearch::mixed;
}

bool separable_quietly(const Dataset& dataset, const Clustering& clustering, Separation kind) {
    try {
        return check_separation(dataset, clustering, kind).separable;
    } catch (const Error& e) {
        if (e.code() == Errc::NegativeBeta) return false;
        throw;
    }
}

}  // namespace

SeparabilityReport check_variational(const Dataset& dataset, const Clustering& clustering) {
    require_compatible(dataset, clustering);
    require_k_at_least_two(clustering);
    SeparabilityReport report;
    report.kind = Separation::variational;
    report.threshold = std::sqrt(2.0) * std::sqrt(cost_q(dataset, clustering));
    judge_gap(dataset, clustering, report);
    return report;
}

SeparabilityReport check_residual(const Dataset& dataset, const Clustering& clustering) {
    require_compatible(dataset, clustering);
    require_k_at_least_two(clustering);
    const double b = beta(dataset, clustering);
    if (b < 0.0) throw Error(Errc::NegativeBeta, "beta = " + std::to_string(b) + " < 0, residual threshold undefined");
    SeparabilityReport report;
    report.kind = Separation::residual;
    report.threshold = std::sqrt(b);
    judge_gap(dataset, clustering, report);
    return report;
}

SeparabilityReport check_separation(const Dataset& dataset, const Clustering& clustering, Separation kind) {
    return kind == Separation::residual ? check_residual(dataset, clustering) : check_variational(dataset, clustering);
}

std::optional<Clustering> find_sub_separation(const Dataset& block, Separation kind, int k_max,
                                       const RangeCheckOptions& options, SubSearch* used) {
    const std::size_t n = block.size();
    const int upper = std::min(k_max, static_cast<int>(n / 2));
    if (upper < 2) return std::nullopt;
    const bool exhaustive = n <= kExhaustiveBlockLimit;
    if (used) *used = exhaustive ? SubSearch::exhaustive : SubSearch::heuristic;

    for (int k = 2; k <= upper; ++k) {
        if (exhaustive) {
            // A separation of either kind is the unique Q-minimizer, so checking the optimum and
            // its near-ties covers every candidate.
            const OracleResult opt = exhaustive_optimum(block, k);
            if (separable_quietly(block, opt.best_clustering, kind)) return opt.best_clustering;
            for (const auto& tie : opt.ties)
                if (separable_quietly(block, tie, kind)) return tie;
        } else {
            const RestartOutcome best = best_of_restarts(block, k, seeding_for(kind),
                                                         derive_seed(options.rng_seed, static_cast<std::uint64_t>(k), 0, 7),
                                                         options.restarts);
            if (separable_quietly(block, best.clustering, kind)) return best.clustering;
        }
    }
    return std::nullopt;
}

SeparabilityReport check_range(const Dataset& dataset, const Clustering& clustering, Separation kind, int K,
                               const RangeCheckOptions& options) {
    if (K < 2) throw Error(Errc::InvalidArgs, "range check needs K >= 2, got " + std::to_string(K));
    SeparabilityReport report = check_separation(dataset, clustering, kind);
    if (!report.separable) return report;

    const auto blocks = clustering.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        // Two blocks of size >= 2 need at least four points.
        if (blocks[b].size() < 4) continue;
        const Dataset sub = dataset.subset(blocks[b]);
        SubSearch used = SubSearch::none;
        RangeCheckOptions sub_options = options;
        sub_options.rng_seed = derive_seed(options.rng_seed, b);
        const auto found = find_sub_separation(sub, kind, K + 1, sub_options, &used);
        report.sub_search = merge(report.sub_search, used);
        if (found) {
            report.separable = false;
            report.sub_separable_block = static_cast<int>(b);
            report.sub_separable_k = found->k();
            // Witness: the closest pair that the sub-separation puts in different sub-blocks.
            const auto& d = sub.distances();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < sub.size(); ++i)
                for (std::size_t l = i + 1; l < sub.size(); ++l)
                    if (found->label(i) != found->label(l) && d(i, l) < best) {
                        best = d(i, l);
                        report.witness_pair = std::pair{blocks[b][i], blocks[b][l]};
                    }
            return report;
        }
    }
    report.level = clustering.k();
    return report;
}

}  // namespace widegaps
