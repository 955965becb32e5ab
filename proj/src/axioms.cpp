#include "widegaps/axioms.hpp"

#include <random>

#include "widegaps/transforms.hpp"

namespace widegaps {

namespace {

std::string describe(const RangeResult& r) {
    std::string s = "k=" + std::to_string(r.k) + " labels=";
    for (int lab : r.clustering.labels()) s += std::to_string(lab);
    return s;
}

bool same_result(const RangeResult& a, const RangeResult& b) {
    return a.k == b.k && a.clustering.same_partition(b.clustering);
}

int uniform_int(std::mt19937_64& gen, int lo, int hi) {
    return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

double uniform_real(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
}

}  // namespace

GeneratorConfig random_config(std::uint64_t seed, int trial) {
    std::mt19937_64 gen(derive_seed(seed, 0xc0f1, static_cast<std::uint64_t>(trial)));
    GeneratorConfig cfg;
    cfg.k = uniform_int(gen, 2, 4);
    cfg.sizes.clear();
    for (int b = 0; b < cfg.k; ++b) cfg.sizes.push_back(uniform_int(gen, 3, 8));
    cfg.dim = 2;
    cfg.intra_spread = 1.0;
    cfg.gap_margin = uniform_real(gen, 1.5, 3.0);
    cfg.kind = trial % 2 == 0 ? Separation::variational : Separation::residual;
    cfg.rng_seed = gen();
    return cfg;
}

SuiteResult scale_suite(int trials, std::uint64_t seed, int k_x) {
    SuiteResult res{"scale", 0, trials, {}};
    for (int t = 0; t < trials; ++t) {
        const GeneratorConfig cfg = random_config(seed, t);
        const PlantedData data = generate_clusterable(cfg);
        const std::uint64_t run_seed = derive_seed(seed, 0x5ca1e, static_cast<std::uint64_t>(t));
        const RangeResult base = discover_range(data.dataset, k_x, cfg.kind, run_seed);
        std::string detail;
        for (double alpha : {0.5, 2.0, 10.0}) {
            const Dataset scaled = apply_transform(data.dataset, TransformSpec::scale(alpha), 0);
            const RangeResult r = discover_range(scaled, k_x, cfg.kind, run_seed);
            if (!same_result(base, r))
                detail += "alpha=" + std::to_string(alpha) + ": " + describe(r) + " vs " + describe(base) + "; ";
        }
        if (detail.empty()) ++res.passed;
        else res.failures.push_back({t, run_seed, detail});
    }
    return res;
}

SuiteResult consistency_suite(int trials, std::uint64_t seed, int k_x) {
    SuiteResult res{"consistency", 0, trials, {}};
    for (int t = 0; t < trials; ++t) {
        const GeneratorConfig cfg = random_config(seed, t);
        const PlantedData data = generate_clusterable(cfg);
        const std::uint64_t run_seed = derive_seed(seed, 0xc0c0, static_cast<std::uint64_t>(t));
        const RangeResult base = discover_range(data.dataset, k_x, cfg.kind, run_seed);

        std::mt19937_64 gen(run_seed);
        const TransformSpec spec = TransformSpec::consistency(TransformKind::lower_bounded_relative_consistency,
                                                              base.clustering, uniform_real(gen, 0.2, 1.0),
                                                              uniform_real(gen, 1.0, 3.0));
        const Dataset moved = apply_transform(data.dataset, spec, gen());
        const TransformVerification ver = verify_transform(data.dataset, moved, spec);
        const RangeResult r = discover_range(moved, k_x, cfg.kind, run_seed);
        if (ver.ok && same_result(base, r)) {
            ++res.passed;
        } else {
            res.failures.push_back({t, run_seed,
                                    (ver.ok ? std::string() : "transform failed verification; ") + describe(r) +
                                        " vs " + describe(base)});
        }
    }
    return res;
}

SuiteResult richness_suite(int trials, std::uint64_t seed) {
    SuiteResult res{"richness", 0, trials, {}};
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 gen(derive_seed(seed, 0x71c4, static_cast<std::uint64_t>(t)));
        const int k = uniform_int(gen, 1, 5);
        std::vector<int> labels;
        for (int b = 0; b < k; ++b) {
            const int size = uniform_int(gen, 2, 6);
            labels.insert(labels.end(), static_cast<std::size_t>(size), b);
        }
        std::shuffle(labels.begin(), labels.end(), gen);
        const Clustering target = Clustering::from_labels(labels);
        const Separation kind = t % 2 == 0 ? Separation::variational : Separation::residual;
        const std::uint64_t run_seed = gen();
        const Dataset witness = richness_witness(target, kind, run_seed);
        const RangeResult r = discover_range(witness, target.k(), kind, run_seed, RangeOptions{16});
        if (r.k == target.k() && r.clustering.same_partition(target)) {
            ++res.passed;
        } else {
            res.failures.push_back({t, run_seed, describe(r) + " vs target k=" + std::to_string(target.k())});
        }
    }
    return res;
}

}  // namespace widegaps
