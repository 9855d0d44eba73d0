#include <benchmark/benchmark.h>

#include "lblab/approx_oracle.hpp"
#include "lblab/optimizers.hpp"
#include "lblab/symbolic_trace.hpp"

using namespace lblab;

static void BM_BestUniform(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(best_uniform([](double x) { return 1.0 / x; }, 1.0, 4.0, k));
}
BENCHMARK(BM_BestUniform)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BestL1(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(best_l1([](double x) { return 1.0 / (x + 2.5); }, -1.5, 1.5, k));
}
BENCHMARK(BM_BestL1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_WeightedL2(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(best_weighted_l2(-0.5, k));
}
BENCHMARK(BM_WeightedL2)->Arg(4)->Arg(8)->Arg(12);

static void BM_RunSagFsm(benchmark::State& state) {
    const auto inst = fsm_instance(std::vector<double>(8, -10.0), 100, 1, 1, 4);
    const auto sched = make_optimizer("sag", params_for(inst));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run(sched, inst, 200, seed++));
}
BENCHMARK(BM_RunSagFsm)->Unit(benchmark::kMicrosecond);

static void BM_RunSdcaRlm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto rlm = rlm_instance(std::vector<double>(n / 2, 0.3), 0.01, n);
    const auto sched = make_optimizer("sdca", params_for(rlm.dual));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run(sched, rlm, 500, seed++));
}
BENCHMARK(BM_RunSdcaRlm)->Arg(20)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_LbfgsChain(benchmark::State& state) {
    const auto inst = nesterov_chain(static_cast<std::size_t>(state.range(0)), 100, 1);
    const auto sched = make_optimizer("lbfgs", params_for(inst));
    for (auto _ : state) benchmark::DoNotOptimize(run(sched, inst, 200, 0));
}
BENCHMARK(BM_LbfgsChain)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_TraceFsm(benchmark::State& state) {
    FamilySpec spec;
    spec.kind = FamilyKind::fsm;
    spec.n = 3;
    spec.d = 4;
    spec.mu = 1;
    spec.L = 100;
    OptimizerParams p;
    p.L = 100;
    p.mu = 1;
    p.n = 3;
    p.d = 4;
    const auto sched = make_optimizer("sag", p);
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(trace_oblivious(sched, spec, k, 0));
}
BENCHMARK(BM_TraceFsm)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
