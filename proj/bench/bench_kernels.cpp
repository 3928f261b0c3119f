// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <vector>

#include "wls/deficit_search.hpp"
#include "wls/scan.hpp"

namespace {

wls::ScanSpec scan_spec(int steps) {
    wls::ScanSpec s;
    s.d = 3;
    s.beta = {-6.0, 1.0, steps};
    s.gamma = {-6.0, 2.9, steps};
    return s;
}

void BM_scan_serial(benchmark::State& state) {
    const wls::ScanSpec s = scan_spec(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wls::scan_serial(s));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_scan_parallel(benchmark::State& state) {
    const wls::ScanSpec s = scan_spec(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wls::scan_parallel(s));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

const wls::EvalSettings cert_eval{256, 24, 1.0, wls::RadialKind::adaptive_panel};

void BM_certificate_grid_serial(benchmark::State& state) {
    const auto pts = wls::certificate_points(3, -4.0, 2.5, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wls::certificate_grid_serial(pts, cert_eval, 9));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

void BM_certificate_grid_parallel(benchmark::State& state) {
    const auto pts = wls::certificate_points(3, -4.0, 2.5, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(wls::certificate_grid_parallel(pts, cert_eval, 9));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}

}  // namespace

BENCHMARK(BM_scan_serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_certificate_grid_serial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_certificate_grid_parallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
