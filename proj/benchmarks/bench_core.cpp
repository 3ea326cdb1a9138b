#include <benchmark/benchmark.h>

#include "treelift/psi.hpp"

using namespace treelift;

static void BM_PolyMul(benchmark::State& state) {
    const RateGraph g = RateGraph::complete(static_cast<int>(state.range(0)));
    const Poly a = kirchhoff_sum(g, 1);
    const Poly b = kirchhoff_sum(g, 2);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
    state.counters["terms"] = static_cast<double>((a * b).term_count());
}
BENCHMARK(BM_PolyMul)->Arg(3)->Arg(4)->Arg(5);

static void BM_ExactDiv(benchmark::State& state) {
    const RateGraph g = RateGraph::complete(static_cast<int>(state.range(0)));
    const Poly a = kirchhoff_sum(g, 1);
    const Poly b = kirchhoff_sum(g, 2);
    const Poly prod = a * b;
    for (auto _ : state) benchmark::DoNotOptimize(prod.exact_div(b));
}
BENCHMARK(BM_ExactDiv)->Arg(3)->Arg(4)->Arg(5);

static void BM_EnumerateTrees(benchmark::State& state) {
    const RateGraph g = RateGraph::complete(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_arborescences(g, 1));
}
BENCHMARK(BM_EnumerateTrees)->Arg(4)->Arg(5)->Arg(6);

static void BM_RhoRing(benchmark::State& state) {
    const LiftedChain lc = build_lift(RateGraph::ring(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(rho(lc, 0));
}
BENCHMARK(BM_RhoRing)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_PitTrial(benchmark::State& state) {
    const LiftedChain lc =
        build_lift(RateGraph::complete(static_cast<int>(state.range(0))));
    const std::map<int, long long> claim = chapuy_claim(lc.base().vertex_count());
    PitOptions opts;
    opts.trials = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        opts.seed = seed++;
        benchmark::DoNotOptimize(pit_verify(lc, claim, opts));
    }
}
BENCHMARK(BM_PitTrial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
