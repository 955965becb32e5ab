#include "widegaps/clusterers.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "widegaps/kernels.hpp"

namespace widegaps {

std::string_view seeding_name(Seeding s) noexcept { return s == Seeding::residual ? "residual" : "classic"; }

Seeding parse_seeding(std::string_view name) {
    if (name == "classic") return Seeding::classic;
    if (name == "residual") return Seeding::residual;
    throw Error(Errc::InvalidArgs, "unknown seeding variant '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(base);
    h = mix(h ^ a);
    h = mix(h ^ b);
    return mix(h ^ c);
}

bool SeedingTrace::all_distinct_blocks_hit() const {
    if (clusters_hit.size() != seeds.size()) return false;
    std::vector<int> seen = clusters_hit;
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

namespace {

// 53 random bits in [0, 1); identical on every platform for a given engine state.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform01(gen) * static_cast<double>(n));
    return std::min(i, n - 1);
}

}  // namespace

SeedingTrace seed(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, const Clustering* planted) {
    const std::size_t n = dataset.size();
    if (k < 2 || static_cast<std::size_t>(2 * k) > n)
        throw Error(Errc::KOutOfRange, "seeding needs 2 <= k <= n/2, got k=" + std::to_string(k) + " for n=" +
                                           std::to_string(n));
    if (planted) require_compatible(dataset, *planted);

    const auto& d = dataset.distances();
    const double s = sigma(dataset);
    const double floor_sq = variant == Seeding::residual ? s * s : 0.0;

    SeedingTrace trace;
    trace.variant = variant;
    trace.rng_seed = rng_seed;
    std::mt19937_64 gen(rng_seed);

    std::vector<double> closest(n, std::numeric_limits<double>::infinity());
    std::vector<char> is_seed(n, 0);
    auto take = [&](PointId p) {
        trace.seeds.push_back(p);
        is_seed[p] = 1;
        if (planted) trace.clusters_hit.push_back(planted->label(p));
        for (std::size_t i = 0; i < n; ++i) closest[i] = std::min(closest[i], d.squared(i, p));
    };

    trace.step_weights.emplace_back(n, 1.0);
    take(uniform_index(gen, n));

    for (int step = 1; step < k; ++step) {
        std::vector<double> w(n, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_seed[i]) continue;
            w[i] = std::max(0.0, closest[i] - floor_sq);
            total += w[i];
        }
        PointId chosen = 0;
        if (total > 0.0) {
            const double r = uniform01(gen) * total;
            double acc = 0.0;
            std::optional<PointId> last_positive;
            bool found = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (w[i] <= 0.0) continue;
                last_positive = i;
                acc += w[i];
                if (acc > r) {
                    chosen = i;
                    found = true;
                    break;
                }
            }
            if (!found) chosen = *last_positive;
        } else {
            std::vector<PointId> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!is_seed[i]) free.push_back(i);
            chosen = free[uniform_index(gen, free.size())];
            trace.uniform_fallback_steps.push_back(static_cast<std::size_t>(step));
        }
        trace.step_weights.push_back(std::move(w));
        take(chosen);
    }
    return trace;
}

SeedingTrace seed_kmeanspp(const Dataset& dataset, int k, std::uint64_t rng_seed, const Clustering* planted) {
    return seed(dataset, k, Seeding::classic, rng_seed, planted);
}

SeedingTrace seed_res_kmeanspp(const Dataset& dataset, int k, std::uint64_t rng_seed, const Clustering* planted) {
    return seed(dataset, k, Seeding::residual, rng_seed, planted);
}

// ---------------------------------------------------------------------------
// Refinement works on per-block sums of squared distances only. For a block C with
// unordered pair sum S and a point i with T = sum_{l in C} d^2(i,l):
//   f(i,C) = T/|C| - S/|C|^2       (squared distance to the block centroid)
// and Q(C) = S/|C|. Moves are exact: they are applied only if Q strictly drops.

namespace {

struct BlockSums {
    std::vector<double> pair_sum;
    std::vector<std::size_t> size;
};

BlockSums block_sums(const PseudoDistanceMatrix& d, const std::vector<int>& labels, int k) {
    BlockSums s{std::vector<double>(static_cast<std::size_t>(k), 0.0), std::vector<std::size_t>(static_cast<std::size_t>(k), 0)};
    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        ++s.size[static_cast<std::size_t>(labels[i])];
        for (std::size_t l = i + 1; l < n; ++l)
            if (labels[i] == labels[l]) s.pair_sum[static_cast<std::size_t>(labels[i])] += d.squared(i, l);
    }
    return s;
}

double total_q(const BlockSums& s) {
    double q = 0.0;
    for (std::size_t b = 0; b < s.size.size(); ++b) q += s.pair_sum[b] / static_cast<double>(s.size[b]);
    return q;
}

}  // namespace

RefineResult refine_pairwise(const Dataset& dataset, const SeedingTrace& trace) {
    const auto& d = dataset.distances();
    const std::size_t n = dataset.size();
    const int k = static_cast<int>(trace.seeds.size());
    const auto ku = static_cast<std::size_t>(k);

    std::vector<int> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < ku; ++s) {
            const double v = d(i, trace.seeds[s]);
            if (v < best) {
                best = v;
                labels[i] = static_cast<int>(s);
            }
        }
    }

    RefineResult result{Clustering::single_block(std::max<std::size_t>(n, 2)), 0.0, 0, false, 0, 0, {}};

    // Lift singleton blocks: borrow the closest non-seed point from a block that can spare one.
    std::vector<std::size_t> sizes(ku, 0);
    for (int lab : labels) ++sizes[static_cast<std::size_t>(lab)];
    std::vector<char> is_seed(n, 0);
    for (PointId s : trace.seeds) is_seed[s] = 1;
    for (std::size_t b = 0; b < ku; ++b) {
        while (sizes[b] < 2) {
            std::optional<PointId> pick;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                if (is_seed[i] || sizes[static_cast<std::size_t>(labels[i])] < 3) continue;
                const double v = d(i, trace.seeds[b]);
                if (v < best) {
                    best = v;
                    pick = i;
                }
            }
            if (!pick) throw Error(Errc::InvariantBreach, "cannot lift a singleton block; k > n/2?");
            --sizes[static_cast<std::size_t>(labels[*pick])];
            labels[*pick] = static_cast<int>(b);
            ++sizes[b];
            ++result.repaired_points;
        }
    }

    BlockSums sums = block_sums(d, labels, k);
    double q = total_q(sums);
    result.q_history.push_back(q);

    std::vector<double> t(ku);
    while (result.sweeps < kMaxSweeps) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::fill(t.begin(), t.end(), 0.0);
            for (std::size_t l = 0; l < n; ++l)
                if (l != i) t[static_cast<std::size_t>(labels[l])] += d.squared(i, l);

            const auto a = static_cast<std::size_t>(labels[i]);
            auto centroid_sq = [&](std::size_t c) {
                const auto sz = static_cast<double>(sums.size[c]);
                return t[c] / sz - sums.pair_sum[c] / (sz * sz);
            };
            std::size_t target = a;
            double target_f = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < ku; ++c) {
                if (c == a) continue;
                const double f = centroid_sq(c);
                if (f < target_f) {
                    target_f = f;
                    target = c;
                }
            }
            if (target == a || !(target_f < centroid_sq(a))) continue;

            const auto sa = static_cast<double>(sums.size[a]);
            const auto sb = static_cast<double>(sums.size[target]);
            const double removed = (sums.pair_sum[a] - t[a]) / (sa - 1.0) - sums.pair_sum[a] / sa;
            const double added = (sums.pair_sum[target] + t[target]) / (sb + 1.0) - sums.pair_sum[target] / sb;
            const double delta = removed + added;
            // Relative floor keeps fp noise from cycling and stays scale invariant.
            if (!(delta < -kAbsTol * q)) continue;
            if (sums.size[a] <= 2) {
                ++result.rejected_moves;
                continue;
            }
            sums.pair_sum[a] -= t[a];
            sums.pair_sum[target] += t[target];
            --sums.size[a];
            ++sums.size[target];
            labels[i] = static_cast<int>(target);
            moved = true;
        }
        ++result.sweeps;
        // Recompute from scratch so incremental drift never accumulates across sweeps.
        sums = block_sums(d, labels, k);
        const double q_new = total_q(sums);
        if (!at_most(q_new, q))
            throw Error(Errc::InvariantBreach, "refinement increased Q from " + std::to_string(q) + " to " +
                                                   std::to_string(q_new));
        q = q_new;
        result.q_history.push_back(q);
        if (!moved) break;
    }
    result.hit_sweep_cap = result.sweeps >= kMaxSweeps;
    result.clustering = Clustering(std::move(labels), k);
    result.q = cost_q(dataset, result.clustering);
    return result;
}

// ---------------------------------------------------------------------------

RestartOutcome best_of_restarts(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restarts,
                                Backend backend) {
    if (restarts < 1) throw Error(Errc::InvalidArgs, "restarts must be >= 1");
    if (k < 2 || static_cast<std::size_t>(2 * k) > dataset.size())
        throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " outside 2..n/2");
    return backend == Backend::serial ? kernels::serial::best_of_restarts(dataset, k, variant, rng_seed, restarts)
                                      : kernels::omp::best_of_restarts(dataset, k, variant, rng_seed, restarts);
}

RangeResult discover_range(const Dataset& dataset, int k_x, Separation kind, std::uint64_t rng_seed,
                           const RangeOptions& options) {
    RangeResult result;
    result.clustering = Clustering::single_block(dataset.size());
    result.kind = kind;
    result.k_x = k_x;
    result.restarts = options.restarts;
    if (k_x < 2) return result;

    const int k_hi = std::min(k_x, static_cast<int>(dataset.size() / 2));
    for (int k = k_hi; k >= 2; --k) {
        RestartOutcome best = best_of_restarts(dataset, k, seeding_for(kind), rng_seed, options.restarts, options.backend);
        RangeStep step{k, false, false, best.q, best.restart};
        try {
            step.separable = check_separation(dataset, best.clustering, kind).separable;
        } catch (const Error& e) {
            if (e.code() != Errc::NegativeBeta) throw;
        }
        if (step.separable) {
            const int k_sub = k_x - k + 1;
            if (k_sub >= 2) {
                const auto blocks = best.clustering.blocks();
                for (std::size_t b = 0; b < blocks.size() && !step.sub_structure; ++b) {
                    if (blocks[b].size() < 4) continue;
                    const Dataset sub = dataset.subset(blocks[b]);
                    const RangeResult inner = discover_range(
                        sub, k_sub, kind, derive_seed(rng_seed, static_cast<std::uint64_t>(k), b, 1), options);
                    if (inner.k >= 2) step.sub_structure = true;
                }
            }
            result.per_k_log.push_back(step);
            if (!step.sub_structure) {
                result.k = k;
                result.clustering = std::move(best.clustering);
                return result;
            }
            continue;
        }
        result.per_k_log.push_back(step);
    }
    return result;
}

}  // namespace widegaps
