#ifndef WIDEGAPS_TESTS_FIXTURES_HPP
#define WIDEGAPS_TESTS_FIXTURES_HPP

#include <cmath>
#include <random>
#include <vector>

#include "widegaps/core.hpp"

namespace fixtures {

using namespace widegaps;

// Points a,b,c,d with d(a,b) = d(c,d) = intra and every other distance = inter.
inline Dataset four_point(double inter, double intra = 1.0) {
    // pairs: ab ac ad bc bd cd
    return Dataset::from_distances(PseudoDistanceMatrix(4, {intra, inter, inter, inter, inter, intra}));
}

inline Clustering four_point_split() { return Clustering({0, 0, 1, 1}, 2); }

// Dense symmetric matrix from a function of (i, l).
template <typename F>
Dataset matrix_dataset(std::size_t n, F&& f) {
    std::vector<double> condensed;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = i + 1; l < n; ++l) condensed.push_back(f(i, l));
    return Dataset::from_distances(PseudoDistanceMatrix(n, std::move(condensed)));
}

// Random pseudo-distances in [lo, hi]; generally violates the triangle inequality.
inline Dataset random_pseudo(std::size_t n, std::uint64_t seed, double lo = 0.5, double hi = 3.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    return matrix_dataset(n, [&](std::size_t, std::size_t) { return u(gen); });
}

inline Embedding random_embedding(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Embedding e{n, dim, {}};
    for (std::size_t i = 0; i < n * dim; ++i) e.coords.push_back(g(gen));
    return e;
}

// Random valid labelling with k blocks of size >= 2.
inline Clustering random_clustering(std::size_t n, int k, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<int> labels;
    for (int b = 0; b < k; ++b) labels.insert(labels.end(), 2, b);
    while (labels.size() < n) labels.push_back(static_cast<int>(gen() % static_cast<std::uint64_t>(k)));
    std::shuffle(labels.begin(), labels.end(), gen);
    return Clustering(labels, k);
}

// Independent Q: every block's centroid from coordinates, then squared distances to it.
inline double centroid_q(const Embedding& e, const Clustering& cl) {
    double q = 0.0;
    for (const auto& block : cl.blocks()) {
        std::vector<double> c(e.dim, 0.0);
        for (auto i : block)
            for (std::size_t t = 0; t < e.dim; ++t) c[t] += e.coords[i * e.dim + t];
        for (auto& x : c) x /= static_cast<double>(block.size());
        for (auto i : block)
            for (std::size_t t = 0; t < e.dim; ++t) {
                const double diff = e.coords[i * e.dim + t] - c[t];
                q += diff * diff;
            }
    }
    return q;
}

}  // namespace fixtures

#endif
