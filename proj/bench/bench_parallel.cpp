// Serial references against the OpenMP paths.

#include <benchmark/benchmark.h>

#include <cgra/dse.hpp>
#include <cgra/matmul.hpp>
#include <cgra/simulator.hpp>

#include "random_context.hpp"

using namespace cgra;

namespace {

std::vector<KernelInput> kernel_set() {
    std::vector<KernelInput> kernels{{"matmul8", generate_matmul_context(8, 1)}};
    std::mt19937_64 rng(11);
    for (int i = 0; i < 8; ++i) kernels.push_back({"r" + std::to_string(i), testgen::random_context(rng)});
    return kernels;
}

SearchSpace wide_space() {
    SearchSpace s;
    s.shr_options = {0, 1, 2, 3};
    s.shc_options = {0, 1, 2, 3};
    s.stage_options = {1, 2, 3};
    s.max_area = 1e9;
    return s;
}

CostTable costs_with_fallback() {
    CostTable c = CostTable::defaults();
    c.sw_area_fallback = true;
    // Unmeasured variants borrow a nominal delay so every candidate is evaluated.
    for (int stages = 1; stages <= 3; ++stages)
        for (int shr = 0; shr <= 3; ++shr)
            for (int shc = 0; shc <= 3; ++shc) {
                const VariantKey key{stages == 1 ? Variant::rs : Variant::rsp, shr, shc, stages};
                c.measured_array_delay.try_emplace(key, 20.0 + shr + shc - 2.0 * stages);
            }
    return c;
}

void run_explore(benchmark::State& state, bool parallel) {
    const auto kernels = kernel_set();
    const auto space = wide_space();
    const auto costs = costs_with_fallback();
    for (auto _ : state) {
        auto r = explore(space, ArchParams{}, kernels, costs, SelectionPolicy::min_et(), parallel);
        benchmark::DoNotOptimize(r);
    }
}

void BM_ExploreSerial(benchmark::State& state) { run_explore(state, false); }
void BM_ExploreParallel(benchmark::State& state) { run_explore(state, true); }

void run_simulate_many(benchmark::State& state, bool parallel) {
    const int n = 8;
    const auto layout = MatmulLayout::packed(n);
    const ArchParams arch = ArchParams::shared(n, n, 1, 1, 2);
    const auto rctx = rearrange(generate_matmul_context(n, 1, layout), arch);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> entry(0, 15);
    std::vector<MemoryImage> inputs;
    for (int i = 0; i < state.range(0); ++i) {
        IntMatrix x(n, n), y(n, n);
        for (auto& v : x.values) v = entry(rng);
        for (auto& v : y.values) v = entry(rng);
        inputs.push_back(make_matmul_memory(x, y, entry(rng), layout));
    }
    for (auto _ : state) {
        auto out = parallel ? simulate_many(rctx, arch, inputs) : simulate_many_serial(rctx, arch, inputs);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateManySerial(benchmark::State& state) { run_simulate_many(state, false); }
void BM_SimulateManyParallel(benchmark::State& state) { run_simulate_many(state, true); }

} // namespace

BENCHMARK(BM_ExploreSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExploreParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateManySerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateManyParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
