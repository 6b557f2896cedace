#include <benchmark/benchmark.h>

#include "velavg/degeneracy.hpp"

using namespace velavg;

static void BM_OmegaSetMeasure(benchmark::State& state) {
    const auto spec = SymbolSpec::conservation_law({VelocityFunction::power(2)}, {-1, 1}, true);
    const FrequencyPoint fp{0.3, {0.9, 0.0}};
    for (auto _ : state)
        benchmark::DoNotOptimize(degeneracy::omega_set_measure(spec, fp, 1e-3, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_OmegaSetMeasure)->Arg(1 << 12)->Arg(1 << 16);

static void BM_FitBurgers(benchmark::State& state) {
    const auto spec =
        SymbolSpec::conservation_law({VelocityFunction::power(static_cast<double>(state.range(0)))}, {-1, 1}, true);
    const auto deltas = degeneracy::dyadic_grid(-12, -3);
    const auto Js = degeneracy::dyadic_grid(0, 5);
    for (auto _ : state) benchmark::DoNotOptimize(degeneracy::fit_degeneracy(spec, deltas, Js));
}
BENCHMARK(BM_FitBurgers)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_FitTwoDimensionalFlux(benchmark::State& state) {
    const auto spec = SymbolSpec::conservation_law({VelocityFunction::power(1), VelocityFunction::power(2)}, {-1, 1});
    const auto deltas = degeneracy::dyadic_grid(-10, -3);
    for (auto _ : state) benchmark::DoNotOptimize(degeneracy::fit_degeneracy(spec, deltas, {1.0, 4.0}));
}
BENCHMARK(BM_FitTwoDimensionalFlux)->Unit(benchmark::kMillisecond);
