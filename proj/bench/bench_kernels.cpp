#include <benchmark/benchmark.h>

#include <cmath>

#include "nep/greens.hpp"
#include "nep/shoot.hpp"
#include "nep/timemap.hpp"

using namespace nep;

namespace {

const NonlinearModel& gelfand()
{
    static NonlinearModel m = builtin_model("gelfand");
    return m;
}

void sweep_kernel(benchmark::State& state, Execution exec)
{
    Potential pot(gelfand(), Convention::from_minus_infinity);
    auto Cs = log_space(1e-3, 1e3, static_cast<int>(state.range(0)));
    double gs = std::sqrt(100.0) / -1.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(pot, 100.0, gs, TimeMapBranch::asym_nonmonotone, Cs, exec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void shoot_kernel(benchmark::State& state, Execution exec)
{
    ProblemSpec prob(1.0, BoundaryCondition::robin(-1.1), 100.0, gelfand());
    ShootOptions o;
    o.n_scan = static_cast<int>(state.range(0));
    o.exec = exec;
    for (auto _ : state) {
        benchmark::DoNotOptimize(shoot(prob, o));
    }
}

SolutionProfile image_profile(int n)
{
    ProblemSpec prob(1.0, BoundaryCondition::robin(-1.1), 100.0, gelfand());
    ShootOptions o;
    o.n = n;
    return shoot(prob, o).profiles.front();
}

void BM_IntegralImage(benchmark::State& state)
{
    ProblemSpec prob(1.0, BoundaryCondition::robin(-1.1), 100.0, gelfand());
    auto p = image_profile(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(integral_image(prob, p));
}

void BM_IntegralImageReference(benchmark::State& state)
{
    ProblemSpec prob(1.0, BoundaryCondition::robin(-1.1), 100.0, gelfand());
    auto p = image_profile(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(integral_image_reference(prob, p));
}

}  // namespace

BENCHMARK_CAPTURE(sweep_kernel, serial, Execution::serial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep_kernel, parallel, Execution::parallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(shoot_kernel, serial, Execution::serial)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(shoot_kernel, parallel, Execution::parallel)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IntegralImage)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_IntegralImageReference)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
