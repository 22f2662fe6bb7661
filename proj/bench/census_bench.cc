// Serial reference against the OpenMP census on the same small space.

#include "nbamin/census.hh"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace nbamin;

namespace {

CensusOptions options(benchmark::State& state)
{
    CensusOptions o;
    o.states = static_cast<unsigned>(state.range(0));
    o.alphabet = static_cast<unsigned>(state.range(1));
    return o;
}

void bm_serial(benchmark::State& state)
{
    const CensusOptions o = options(state);
    for (auto _ : state) {
        const CensusReport r = run_census_serial(o);
        benchmark::DoNotOptimize(r.total);
        state.counters["automata"] = static_cast<double>(r.total);
    }
}

void bm_parallel(benchmark::State& state)
{
    CensusOptions o = options(state);
    o.jobs = static_cast<unsigned>(state.range(2));
    for (auto _ : state) {
        const CensusReport r = run_census_parallel(o);
        benchmark::DoNotOptimize(r.total);
        state.counters["automata"] = static_cast<double>(r.total);
    }
}

void parallel_args(benchmark::internal::Benchmark* b)
{
    const int cores = omp_get_max_threads();
    for (int jobs = 1; jobs <= cores; jobs *= 2) {
        b->Args({1, 3, jobs})->Args({2, 2, jobs});
    }
    if ((cores & (cores - 1)) != 0) {
        b->Args({1, 3, cores})->Args({2, 2, cores});
    }
}

} // namespace

BENCHMARK(bm_serial)->Args({1, 3})->Args({2, 2})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_parallel)->Apply(parallel_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
