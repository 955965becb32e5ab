#include <cmath>
#include <limits>

#include "widegaps/kernels.hpp"

namespace widegaps::kernels::detail {

void distance_row(const Embedding& embedding, std::size_t i, double* out) {
    const auto a = embedding.row(i);
    for (std::size_t l = i + 1; l < embedding.n; ++l) {
        const auto b = embedding.row(l);
        double s = 0.0;
        for (std::size_t c = 0; c < embedding.dim; ++c) {
            const double diff = a[c] - b[c];
            s += diff * diff;
        }
        out[l - i - 1] = std::sqrt(s);
    }
}

// ---------------------------------------------------------------------------
// Restricted growth strings: point 0 is in block 0 and each later point joins an
// open block or opens the next one. A branch is cut as soon as the remaining
// points cannot bring every block to two members, so every leaf is valid.

namespace {

struct WalkState {
    std::vector<int> labels;
    std::vector<std::vector<std::size_t>> members;
    std::vector<double> pair_sums;  // unordered sum of squared distances per block
    int used = 0;
};

bool feasible(const WalkState& st, std::size_t remaining, int k) {
    std::size_t deficit = 2 * static_cast<std::size_t>(k - st.used);
    for (int b = 0; b < st.used; ++b) {
        const std::size_t sz = st.members[static_cast<std::size_t>(b)].size();
        if (sz < 2) deficit += 2 - sz;
    }
    return deficit <= remaining;
}

void assign(WalkState& st, const PseudoDistanceMatrix& d, std::size_t i, int b) {
    auto& mem = st.members[static_cast<std::size_t>(b)];
    double t = 0.0;
    for (std::size_t l : mem) t += d.squared(i, l);
    st.pair_sums[static_cast<std::size_t>(b)] += t;
    mem.push_back(i);
    st.labels[i] = b;
    if (b == st.used) ++st.used;
}

void unassign(WalkState& st, int b, double saved_sum) {
    auto& mem = st.members[static_cast<std::size_t>(b)];
    mem.pop_back();
    st.pair_sums[static_cast<std::size_t>(b)] = saved_sum;
    if (mem.empty()) --st.used;
}

double leaf_cost(const WalkState& st) {
    double q = 0.0;
    for (int b = 0; b < st.used; ++b)
        q += st.pair_sums[static_cast<std::size_t>(b)] / static_cast<double>(st.members[static_cast<std::size_t>(b)].size());
    return q;
}

template <typename Visit>
void descend(WalkState& st, const PseudoDistanceMatrix& d, std::size_t i, std::size_t stop, int k, Visit& visit) {
    const std::size_t n = d.size();
    if (i == stop) {
        visit(st, i == n ? leaf_cost(st) : std::numeric_limits<double>::quiet_NaN());
        return;
    }
    const int limit = std::min(st.used + 1, k);
    for (int b = 0; b < limit; ++b) {
        const double saved = st.pair_sums[static_cast<std::size_t>(b)];
        assign(st, d, i, b);
        if (feasible(st, n - i - 1, k)) descend(st, d, i + 1, stop, k, visit);
        unassign(st, b, saved);
    }
}

WalkState start_state(const PseudoDistanceMatrix& d, int k, const std::vector<int>& prefix) {
    WalkState st;
    st.labels.assign(d.size(), -1);
    st.members.resize(static_cast<std::size_t>(k));
    st.pair_sums.assign(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i] > st.used || prefix[i] >= k) throw Error(Errc::InvalidArgs, "prefix is not a restricted growth string");
        assign(st, d, i, prefix[i]);
    }
    return st;
}

}  // namespace

PartitionEnumerator::PartitionEnumerator(const PseudoDistanceMatrix& d, int k) : d_(d), n_(d.size()), k_(k) {}

template <typename Visit>
void PartitionEnumerator::walk(const std::vector<int>& prefix, Visit&& visit) const {
    WalkState st = start_state(d_, k_, prefix);
    if (!feasible(st, n_ - prefix.size(), k_)) return;
    auto leaf = [&](const WalkState& s, double q) { visit(s.labels, q); };
    descend(st, d_, prefix.size(), n_, k_, leaf);
}

std::vector<std::vector<int>> PartitionEnumerator::prefixes(std::size_t depth) const {
    depth = std::min(depth, n_);
    std::vector<std::vector<int>> out;
    WalkState st = start_state(d_, k_, {});
    auto collect = [&](const WalkState& s, double) {
        out.emplace_back(s.labels.begin(), s.labels.begin() + static_cast<std::ptrdiff_t>(depth));
    };
    descend(st, d_, 0, depth, k_, collect);
    return out;
}

void PartitionEnumerator::find_best(const std::vector<int>& prefix, double& best_q, std::vector<int>& best_labels,
                                    std::uint64_t& scanned) const {
    walk(prefix, [&](const std::vector<int>& labels, double q) {
        ++scanned;
        if (q < best_q) {
            best_q = q;
            best_labels = labels;
        }
    });
}

void PartitionEnumerator::collect_ties(const std::vector<int>& prefix, double best_q,
                                       const std::vector<int>& best_labels, std::size_t cap,
                                       std::vector<std::vector<int>>& ties, std::uint64_t& count) const {
    walk(prefix, [&](const std::vector<int>& labels, double q) {
        if (std::abs(q - best_q) <= tolerance_for(q, best_q) && labels != best_labels) {
            ++count;
            if (ties.size() < cap) ties.push_back(labels);
        }
    });
}

// ---------------------------------------------------------------------------

bool hits_all(const Dataset& dataset, const Clustering& planted, Seeding variant, std::uint64_t trial_seed, int k) {
    const SeedingTrace trace = seed(dataset, k, variant, trial_seed, &planted);
    return trace.all_distinct_blocks_hit();
}

RestartOutcome run_restart(const Dataset& dataset, int k, Seeding variant, std::uint64_t rng_seed, int restart) {
    const SeedingTrace trace =
        seed(dataset, k, variant, derive_seed(rng_seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(restart)));
    RefineResult refined = refine_pairwise(dataset, trace);
    return RestartOutcome{std::move(refined.clustering), refined.q, restart};
}

void scan_anchor(const PseudoDistanceMatrix& before, const PseudoDistanceMatrix& after,
                 const std::vector<PointId>& block, PointId i, std::vector<TransformViolation>& out, std::size_t& count,
                 std::size_t cap) {
    for (PointId j : block) {
        if (j == i) continue;
        const double dij = before(i, j);
        const double pij = after(i, j);
        for (PointId l : block) {
            if (l == i || l == j) continue;
            const double dil = before(i, l);
            if (!(dij <= dil)) continue;
            const double pil = after(i, l);
            if (!at_most(pij, pil)) {
                ++count;
                if (out.size() < cap) out.push_back({TransformClause::order_preserved, i, j, l});
            }
            if (!at_most(pil / pij, dil / dij)) {
                ++count;
                if (out.size() < cap) out.push_back({TransformClause::ratio_not_larger, i, j, l});
            }
        }
    }
}

}  // namespace widegaps::kernels::detail
