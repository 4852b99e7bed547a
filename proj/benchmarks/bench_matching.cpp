#include <benchmark/benchmark.h>

#include <vector>

#include "hids/detector.hpp"
#include "hids/negsel.hpp"
#include "hids/rng.hpp"

namespace {

using namespace hids;

// Fitted stand-in for the KDD schema: the default template with synthetic
// bin edges and the three protocols.
FeatureSchema bench_schema() {
    FeatureSchema s = default_kdd_template();
    for (FeatureDef& f : s.features) {
        if (f.is_binned()) {
            f.bin_edges.clear();
            for (int e = 1; e < f.bin_count; ++e) f.bin_edges.push_back(e - 0.5);
        }
        if (f.kind == FeatureKind::Categorical) f.categories = {"icmp", "tcp", "udp"};
    }
    s.layout();
    return s;
}

std::vector<ConnectionVector> bench_self(const FeatureSchema& s, std::size_t n) {
    Mt64Stream rng(11);
    std::vector<ConnectionVector> out(n);
    for (auto& cv : out) {
        for (const FieldLayout& fl : s.layout())
            cv.values.push_back(static_cast<value_t>(fl.vmin + rng.below(fl.domain)));
    }
    return out;
}

void BM_Matches(benchmark::State& state) {
    FeatureSchema s = bench_schema();
    Mt64Stream rng(3);
    Detector d = random_detector(s, rng);
    auto self = bench_self(s, 1);
    for (auto _ : state) benchmark::DoNotOptimize(matches(s, d, self[0]));
}
BENCHMARK(BM_Matches);

void BM_CountSelfMatchesNaive(benchmark::State& state) {
    FeatureSchema s = bench_schema();
    Mt64Stream rng(3);
    Detector d = random_detector(s, rng);
    auto self = bench_self(s, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_self_matches(s, d, self));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountSelfMatchesNaive)->Arg(5000)->Arg(50000);

void BM_CountSelfMatchesIndexed(benchmark::State& state) {
    FeatureSchema s = bench_schema();
    Mt64Stream rng(3);
    auto self = bench_self(s, static_cast<std::size_t>(state.range(0)));
    SelfIndex index(s, self);
    Detector d = random_detector(s, rng);
    for (auto _ : state) benchmark::DoNotOptimize(index.count_matches(d));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountSelfMatchesIndexed)->Arg(5000)->Arg(50000);

void BM_CrowdingStep(benchmark::State& state) {
    FeatureSchema s = bench_schema();
    auto self = bench_self(s, 5000);
    for (auto& cv : self) cv.label = LabelTag{};
    GaConfig cfg;
    cfg.population_size = static_cast<int>(state.range(0));
    NegselGa ga(s, self, cfg);
    Mt64Stream rng(7);
    ga.init_random(rng);
    for (auto _ : state) benchmark::DoNotOptimize(ga.step(rng));
}
BENCHMARK(BM_CrowdingStep)->Arg(400)->Arg(1600);

}  // namespace

BENCHMARK_MAIN();
