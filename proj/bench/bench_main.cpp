// Serial vs OpenMP timings for the parallel kernels, with the sequential two-scan for scale.

#include <benchmark/benchmark.h>

#include "lattice_chamfer/dt_engine.hpp"
#include "lattice_chamfer/image_io.hpp"
#include "lattice_chamfer/parallel.hpp"
#include "lattice_chamfer/presets.hpp"
#include "lattice_chamfer/weight_opt.hpp"

using namespace lc;

namespace {

GridImage bench_image(const Lattice& l, Int n) { return synth_random(l, {n, n, n}, 0.01, 17, {true, 2}); }

// Arg 0: serial; otherwise the default thread count.
int threads_for(const benchmark::State& s) { return s.range(0) == 0 ? 1 : default_threads(); }

void BM_IterativeOracle(benchmark::State& state) {
    const auto m = preset_mask("bcc4", {15, 17, 24, 29});
    const auto img = bench_image(m.lattice(), state.range(1));
    const int threads = threads_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(parallel_iterative_oracle(img, m, threads));
    state.counters["threads"] = threads;
}
BENCHMARK(BM_IterativeOracle)->ArgsProduct({{0, 1}, {16, 32}})->Unit(benchmark::kMillisecond);

void BM_WeightSearch(benchmark::State& state) {
    const auto g = preset_mask("bcc4");
    const auto d = build_wedges(g);
    const int threads = threads_for(state);
    for (auto _ : state) benchmark::DoNotOptimize(search_integer_weights(g, d, {50, 1.0, threads}));
    state.counters["threads"] = threads;
}
BENCHMARK(BM_WeightSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TwoScan(benchmark::State& state) {
    const auto m = preset_mask("bcc4", {15, 17, 24, 29});
    const auto img = bench_image(m.lattice(), state.range(0));
    const auto plan = make_scan_plan(m, img);
    for (auto _ : state) benchmark::DoNotOptimize(chamfer_two_scan(img, m, plan));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(img.grid().member_count()));
}
BENCHMARK(BM_TwoScan)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
