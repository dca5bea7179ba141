#include <benchmark/benchmark.h>

#include <cmath>

#include "vbwave/assembly.hpp"
#include "vbwave/solitary.hpp"
#include "vbwave/timestep.hpp"

using namespace vbwave;

namespace {

SemidiscreteSystem make_system(int n, ModelKind kind) {
    const double L = 140.0;
    return SemidiscreteSystem(Partition(0.0, L, n), Bathymetry::make(SineShelf{70.0, 0.4}, 0.0, L),
                              {kind, 0.05, 0.05});
}

State bump(const SemidiscreteSystem& sys) {
    return sys.project_initial([](double x) { return 0.5 / std::pow(std::cosh(0.3 * (x - 30.0)), 2); },
                               [](double x) { return 0.5 / std::pow(std::cosh(0.3 * (x - 30.0)), 2); });
}

ModelKind kind_of(int64_t i) { return i == 0 ? ModelKind::CBw : ModelKind::CBs; }

}  // namespace

static void BM_Rhs(benchmark::State& st) {
    const SemidiscreteSystem sys = make_system(static_cast<int>(st.range(0)), kind_of(st.range(1)));
    const State s = bump(sys);
    State r = sys.zero_state();
    for (auto _ : st) {
        sys.rhs(s, r);
        benchmark::DoNotOptimize(r.zc.data());
    }
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Rhs)->ArgsProduct({{500, 2000, 8000}, {0, 1}})->Complexity(benchmark::oN);

static void BM_Rk4Step(benchmark::State& st) {
    const SemidiscreteSystem sys = make_system(static_cast<int>(st.range(0)), ModelKind::CBs);
    State s = bump(sys);
    Rk4Workspace ws;
    const double k = 0.5 * sys.space().partition().h();
    for (auto _ : st) {
        benchmark::DoNotOptimize(rk4_step(sys, s, k, ws));
    }
}
BENCHMARK(BM_Rk4Step)->Arg(2000)->Arg(8000);

static void BM_AssembleSystem(benchmark::State& st) {
    for (auto _ : st) {
        const SemidiscreteSystem sys = make_system(static_cast<int>(st.range(0)), kind_of(st.range(1)));
        benchmark::DoNotOptimize(sys.dim());
    }
}
BENCHMARK(BM_AssembleSystem)->ArgsProduct({{2000, 8000}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_SolveProfile(benchmark::State& st) {
    SolitaryOptions opt;
    opt.points = static_cast<int>(st.range(0));
    for (auto _ : st) {
        benchmark::DoNotOptimize(solve_profile(0.1, 0.1, 1.18112, opt).amplitude);
    }
}
BENCHMARK(BM_SolveProfile)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
