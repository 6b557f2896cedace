#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "velavg/elliptic.hpp"
#include "velavg/initial_data.hpp"
#include "velavg/pde.hpp"

using namespace velavg;

// Cost of a fixed number of steps: final_time is tied to the stable step.
static void BM_ConservationLaw(benchmark::State& state) {
    const auto flux = SymbolSpec::conservation_law({VelocityFunction::power(1)}, {-1, 1});
    const auto scheme = static_cast<pde::Scheme>(state.range(1));
    const GridLayout g(1, static_cast<std::size_t>(state.range(0)), 1.0);
    pde::DataSpec d;
    d.name = "sine";
    d.amplitude = 0.5;
    const auto rho0 = pde::make_initial_data(g, d);
    pde::SchemeConfig cfg;
    cfg.scheme = scheme;
    cfg.final_time = 100.0 * pde::stable_time_step(flux, g, -0.5, 0.5, cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(scheme == pde::Scheme::kinetic_bgk ? pde::solve_kinetic_bgk(flux, rho0, cfg)
                                                                    : pde::solve_conservation_law(flux, rho0, cfg));
}
BENCHMARK(BM_ConservationLaw)
    ->Args({4096, static_cast<int>(pde::Scheme::godunov)})
    ->Args({4096, static_cast<int>(pde::Scheme::engquist_osher)})
    ->Args({1024, static_cast<int>(pde::Scheme::kinetic_bgk)})
    ->Unit(benchmark::kMillisecond);

static void BM_ConvectionDiffusion2D(benchmark::State& state) {
    const auto b = VelocityFunction::abs_power(2);
    const auto z = VelocityFunction::zero();
    const SymbolSpec spec(2, {VelocityFunction::power(1), VelocityFunction::power(2)}, {b, z, z, b}, {-1, 1}, true);
    const GridLayout g(2, static_cast<std::size_t>(state.range(0)), 1.0);
    pde::DataSpec d;
    d.name = "random-bandlimited";
    d.amplitude = 0.5;
    const auto rho0 = pde::make_initial_data(g, d);
    pde::SchemeConfig cfg;
    cfg.final_time = 20.0 * pde::stable_time_step(spec, g, rho0.min(), rho0.max(), cfg);
    for (auto _ : state) benchmark::DoNotOptimize(pde::solve_convection_diffusion(spec, rho0, cfg));
}
BENCHMARK(BM_ConvectionDiffusion2D)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Elliptic2D(benchmark::State& state) {
    const auto b = VelocityFunction::abs_power(1);
    const auto z = VelocityFunction::zero();
    pde::EllipticProblem pb;
    pb.dim = 2;
    pb.n = static_cast<std::size_t>(state.range(0));
    pb.spec = SymbolSpec::diffusion_only(2, {b, z, z, b}, {-1, 1}, false);
    pb.source = VelocityFunction::power(1).scaled(-1.0);
    pb.boundary = [](double x, double y) { return std::sin(2.0 * std::numbers::pi * (x + y)); };
    for (auto _ : state) benchmark::DoNotOptimize(pde::solve_elliptic_degenerate(pb, {}));
}
BENCHMARK(BM_Elliptic2D)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
