#ifndef WIDEGAPS_CLUSTERERS_HPP
#define WIDEGAPS_CLUSTERERS_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "widegaps/core.hpp"
#include "widegaps/exec.hpp"
#include "widegaps/separability.hpp"

namespace widegaps {

/// k-means++ (classic) or res-k-means++ (weights minus sigma^2).
enum class Seeding { classic, residual };

std::string_view seeding_name(Seeding s) noexcept;
Seeding parse_seeding(std::string_view name);

inline Seeding seeding_for(Separation kind) noexcept {
    return kind == Separation::residual ? Seeding::residual : Seeding::classic;
}

struct SeedingTrace {
    Seeding variant = Seeding::classic;
    std::uint64_t rng_seed = 0;
    std::vector<PointId> seeds;
    /// Weight vector each seed was drawn from; step 0 is the uniform draw (all ones).
    std::vector<std::vector<double>> step_weights;
    /// Planted block of each seed, when a planted clustering was supplied.
    std::vector<int> clusters_hit;
    /// Steps where every remaining weight was zero and a uniform draw among non-seeds was used.
    std::vector<std::size_t> uniform_fallback_steps;

    /// True when the seeds landed in distinct planted blocks (requires clusters_hit).
    bool all_distinct_blocks_hit() const;
};

/// Deterministic stream derivation (splitmix64 over the mixed words).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) noexcept;

/// Requires 2 <= k <= n/2; throws KOutOfRange otherwise.
SeedingTrace seed_kmeanspp(const Dataset& dataset, int k, std::uint64_t rng_seed,
                           const Clustering* planted = nullptr);

SeedingTrace seed_res_kmeanspp(const Dataset& dataset, int k, std::uint64_t rng_seed,
                               const Clustering* planted = nullptr);

SeedingTrace seed(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed,
                  const Clustering* planted = nullptr);

inline constexpr int kMaxSweeps = 500;

struct RefineResult {
    Clustering clustering;
    double q = 0.0;
    int sweeps = 0;
    bool hit_sweep_cap = false;
    /// Improving moves turned down because the source block would drop below two members.
    std::size_t rejected_moves = 0;
    /// Points moved after nearest-seed assignment to lift singleton blocks to size 2.
    std::size_t repaired_points = 0;
    /// Q after the initial assignment, then after every sweep.
    std::vector<double> q_history;
};

/// Nearest-seed start, then single-point moves that strictly lower Q, using pairwise distances only.
RefineResult refine_pairwise(const Dataset& dataset, const SeedingTrace& trace);

/// One entry per k tried by the range search.
struct RangeStep {
    int k = 0;
    bool separable = false;
    bool sub_structure = false;  // a block recursively yielded k' >= 2
    double best_q = 0.0;
    int best_restart = 0;
};

struct RangeResult {
    int k = 1;
    Clustering clustering = Clustering::single_block(2);
    Separation kind = Separation::variational;
    int k_x = 1;
    int restarts = 1;
    std::vector<RangeStep> per_k_log;
};

struct RangeOptions {
    int restarts = 8;
    Backend backend = Backend::parallel;
};

/// Range-k_x search: k from k_x down to 2, accept the first separable clustering whose
/// blocks recursively show no structure under k_x - k + 1; otherwise k = 1.
RangeResult discover_range(const Dataset& dataset, int k_x, Separation kind, std::uint64_t rng_seed,
                           const RangeOptions& options = {});

/// Best-Q clustering over `restarts` seeded refinements (ties: lowest restart index).
struct RestartOutcome {
    Clustering clustering;
    double q = 0.0;
    int restart = 0;
};

RestartOutcome best_of_restarts(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restarts,
                                Backend backend = Backend::parallel);

}  // namespace widegaps

#endif
