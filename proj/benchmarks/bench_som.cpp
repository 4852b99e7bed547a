#include <benchmark/benchmark.h>

#include <vector>

#include "hids/rng.hpp"
#include "hids/som.hpp"

namespace {

using namespace hids;

std::vector<std::vector<double>> bench_vectors(std::size_t n, int dim, std::uint64_t seed) {
    Mt64Stream rng(seed);
    std::vector<std::vector<double>> out(n);
    for (auto& x : out) {
        x.resize(dim);
        for (double& v : x) v = rng.real01();
    }
    return out;
}

void BM_FindWinner(benchmark::State& state) {
    SomConfig cfg;
    cfg.grid_side = static_cast<int>(state.range(0));
    SomModel som = init_weights(cfg, 28);
    auto xs = bench_vectors(1, 28, 5);
    for (auto _ : state) benchmark::DoNotOptimize(find_winner(som, xs[0]));
}
BENCHMARK(BM_FindWinner)->Arg(5)->Arg(10)->Arg(15);

void BM_TrainEpoch(benchmark::State& state) {
    SomConfig cfg;
    cfg.grid_side = 10;
    cfg.epochs = 1;
    auto xs = bench_vectors(static_cast<std::size_t>(state.range(0)), 28, 5);
    SomModel som = init_weights(cfg, 28);
    for (auto _ : state) benchmark::DoNotOptimize(train(som, xs, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(1000);

void BM_QuantizationError(benchmark::State& state) {
    SomConfig cfg;
    cfg.grid_side = 10;
    SomModel som = init_weights(cfg, 28);
    auto xs = bench_vectors(2000, 28, 5);
    for (auto _ : state) benchmark::DoNotOptimize(quantization_error(som, xs));
}
BENCHMARK(BM_QuantizationError);

}  // namespace

BENCHMARK_MAIN();
