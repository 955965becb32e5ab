// Serial reference vs OpenMP kernels on identical inputs.

#include <benchmark/benchmark.h>

#include <random>

#include "widegaps/generators.hpp"
#include "widegaps/kernels.hpp"

using namespace widegaps;

namespace {

Embedding cloud(std::size_t n, std::size_t dim) {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> g;
    Embedding e{n, dim, {}};
    for (std::size_t i = 0; i < n * dim; ++i) e.coords.push_back(g(gen));
    return e;
}

PlantedData planted(int m) {
    GeneratorConfig cfg;
    cfg.k = 3;
    cfg.sizes = {m, m, m};
    cfg.rng_seed = 2;
    return generate_clusterable(cfg);
}

template <auto Kernel>
void BM_pairwise(benchmark::State& state) {
    const Embedding e = cloud(static_cast<std::size_t>(state.range(0)), 8);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(e));
}

template <auto Kernel>
void BM_scan(benchmark::State& state) {
    const Dataset ds = Dataset::from_points(cloud(static_cast<std::size_t>(state.range(0)), 2));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(ds.distances(), 3, 64));
}

template <auto Kernel>
void BM_hits(benchmark::State& state) {
    const PlantedData data = planted(50);
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(data.dataset, data.planted, Seeding::classic,
                                        static_cast<std::uint64_t>(state.range(0)), 3));
}

template <auto Kernel>
void BM_restarts(benchmark::State& state) {
    const PlantedData data = planted(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(data.dataset, 3, Seeding::classic, 4, 8));
}

template <auto Kernel>
void BM_triples(benchmark::State& state) {
    const PlantedData data = planted(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(Kernel(data.dataset.distances(), data.dataset.distances(), data.planted, 1000));
}

}  // namespace

BENCHMARK(BM_pairwise<kernels::serial::pairwise_distances>)->Name("pairwise/serial")->Arg(500)->Arg(2000);
BENCHMARK(BM_pairwise<kernels::omp::pairwise_distances>)->Name("pairwise/omp")->Arg(500)->Arg(2000);
BENCHMARK(BM_scan<kernels::serial::scan_partitions>)->Name("scan_partitions/serial")->Arg(10)->Arg(12);
BENCHMARK(BM_scan<kernels::omp::scan_partitions>)->Name("scan_partitions/omp")->Arg(10)->Arg(12);
BENCHMARK(BM_hits<kernels::serial::count_all_hit>)->Name("count_all_hit/serial")->Arg(2000);
BENCHMARK(BM_hits<kernels::omp::count_all_hit>)->Name("count_all_hit/omp")->Arg(2000);
BENCHMARK(BM_restarts<kernels::serial::best_of_restarts>)->Name("best_of_restarts/serial")->Arg(50)->Arg(200);
BENCHMARK(BM_restarts<kernels::omp::best_of_restarts>)->Name("best_of_restarts/omp")->Arg(50)->Arg(200);
BENCHMARK(BM_triples<kernels::serial::intra_triples>)->Name("intra_triples/serial")->Arg(50)->Arg(150);
BENCHMARK(BM_triples<kernels::omp::intra_triples>)->Name("intra_triples/omp")->Arg(50)->Arg(150);

BENCHMARK_MAIN();
