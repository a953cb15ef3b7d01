#include <benchmark/benchmark.h>

#include "psing/eigensolver.hpp"
#include "psing/exponents.hpp"
#include "psing/pdesolver.hpp"
#include "psing/profiles.hpp"

using namespace psing;

namespace {

void BM_BetaStar(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eigensolver::solve_beta_star({4, 2.5}, 1e-12, M).beta_star);
}
BENCHMARK(BM_BetaStar)->Arg(512)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_OmegaStar(benchmark::State& state) {
    const ProblemParams pp(3, 2.0, 1.2);
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(profiles::solve_omega_star(pp, 1e-10, M, 2.0).omega0);
}
BENCHMARK(BM_OmegaStar)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ShotSweep(benchmark::State& state) {
    const ProblemParams pp(4, 4.0, 3.45);
    auto spec = profiles::default_sweep(pp);
    spec.workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(profiles::count_brackets(profiles::sweep(pp, spec)));
}
BENCHMARK(BM_ShotSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolveSteadyWeak(benchmark::State& state) {
    const ProblemParams base(2, 1.5);
    const auto eig = eigensolver::solve_beta_star(base, 1e-12, 1024);
    const ProblemParams pp(2, 1.5, 0.5 * (0.5 + exponents::q_star(eig.beta_star, base)));
    const int nr = static_cast<int>(state.range(0));
    const auto g = pde::PolarGrid::make(2, 1e-6, nr, nr / 4);
    for (auto _ : state) {
        const auto f = pde::solve_steady(g, pde::weak_data(eig.profile, 1.0), pp);
        state.counters["iterations"] = f.stats.iterations;
    }
    state.counters["nodes"] = static_cast<double>(g.size());
}
BENCHMARK(BM_SolveSteadyWeak)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ScalingCheck(benchmark::State& state) {
    const ProblemParams pp(2, 1.5, 0.65);
    const auto g = pde::PolarGrid::make(2, 1.0 / 64, static_cast<int>(state.range(0)), 64);
    for (auto _ : state) benchmark::DoNotOptimize(pde::scaling_invariance_check(pp, 0.5, g).residual);
}
BENCHMARK(BM_ScalingCheck)->Arg(129)->Arg(255)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
