// Serial vs OpenMP strategy sweeps. Arg(0) is the number of periods of the
// pig farm instance; the policy is fixed per benchmark.

#include "riskrjt/generators.hpp"
#include "riskrjt/junction_tree.hpp"
#include "riskrjt/mip_builder.hpp"
#include "riskrjt/oracle.hpp"
#include "riskrjt/reference_solver.hpp"

#include <benchmark/benchmark.h>

using namespace riskrjt;

namespace {

InfluenceDiagram instance(const benchmark::State& state) {
    PigFarmSpec spec;
    spec.periods = static_cast<int>(state.range(0));
    return gen_pigfarm(spec);
}

void oracle(benchmark::State& state, ExecutionPolicy policy) {
    const auto d = instance(state);
    OracleOptions opt;
    opt.policy = policy;
    for (auto _ : state) {
        auto r = oracle_optimize(d, {}, opt);
        benchmark::DoNotOptimize(r.objective);
    }
    state.counters["strategies"] = static_cast<double>(strategy_count(d));
}

void reference(benchmark::State& state, ExecutionPolicy policy) {
    const auto d = instance(state);
    const auto t = build_rjt(d);
    const auto model = build_model({}, t, d);
    ReferenceOptions opt;
    opt.policy = policy;
    for (auto _ : state) {
        auto s = solve_reference(model, t, d, opt);
        benchmark::DoNotOptimize(s.objective);
    }
    state.counters["strategies"] = static_cast<double>(strategy_count(d));
    state.counters["threads"] = policy == ExecutionPolicy::Parallel ? max_threads() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(oracle, serial, ExecutionPolicy::Serial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(oracle, parallel, ExecutionPolicy::Parallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(reference, serial, ExecutionPolicy::Serial)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(reference, parallel, ExecutionPolicy::Parallel)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
