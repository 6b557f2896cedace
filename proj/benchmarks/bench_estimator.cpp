#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "velavg/littlewood_paley.hpp"

using namespace velavg;

namespace {

ScalarField rough(int dim, std::size_t n) {
    ScalarField f(GridLayout(dim, n, 1.0));
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = std::sin(2.0 * std::numbers::pi * static_cast<double>(i % n) / static_cast<double>(n)) +
                      ((i * 2654435761u) % 97) / 970.0;
    return f;
}

}  // namespace

static void BM_Decompose1D(benchmark::State& state) {
    const auto f = rough(1, static_cast<std::size_t>(state.range(0)));
    const int j = lp::nyquist_octave(f.layout);
    for (auto _ : state) benchmark::DoNotOptimize(lp::lp_decompose(f, j));
}
BENCHMARK(BM_Decompose1D)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

static void BM_Estimate(benchmark::State& state) {
    const auto method = state.range(1) == 0 ? lp::Method::lp : lp::Method::increments;
    const auto f = rough(static_cast<int>(state.range(0)), state.range(0) == 1 ? 4096 : 256);
    for (auto _ : state) benchmark::DoNotOptimize(lp::estimate_regularity(f, 1.0, lp::Window{}, method));
}
BENCHMARK(BM_Estimate)->Args({1, 0})->Args({1, 1})->Args({2, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);
