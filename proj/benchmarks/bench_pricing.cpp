#include <benchmark/benchmark.h>

#include "cev/density.hpp"
#include "cev/greeks.hpp"
#include "cev/oracle.hpp"
#include "cev/pricing.hpp"
#include "cev/specfun.hpp"

namespace {

void BM_NcChi2Sf(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::nc_chi2_sf({.w = lambda, .df = 3.0, .noncentrality = lambda}));
    }
}
BENCHMARK(BM_NcChi2Sf)->RangeMultiplier(100)->Range(1, 1'000'000);

void BM_NcChi2Pdf(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::nc_chi2_pdf({.w = lambda, .df = 3.0, .noncentrality = lambda}));
    }
}
BENCHMARK(BM_NcChi2Pdf)->RangeMultiplier(100)->Range(1, 1'000'000);

void BM_CallPrice(benchmark::State& state) {
    cev::CevParams p;
    p.beta = 0.5 + 0.5 * static_cast<double>(state.range(0));
    p.delta_vol = cev::delta_vol_for_sigma0(0.2, p.spot, p.beta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::call_price(p));
    }
}
BENCHMARK(BM_CallPrice)->DenseRange(0, 2);

void BM_FullReport(benchmark::State& state) {
    const cev::CevParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::full_report(p, cev::OptionKind::Call));
    }
}
BENCHMARK(BM_FullReport);

void BM_DensityGrid(benchmark::State& state) {
    const cev::CevParams p;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::density_grid(p, 0.1, 2000.0, static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_DensityGrid)->Arg(200)->Arg(2000);

void BM_MonteCarlo(benchmark::State& state) {
    const cev::CevParams p;
    cev::SdeConfig cfg;
    cfg.n_paths = 10'000;
    cfg.n_steps = 1'000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cev::mc_price(p, cev::OptionKind::Call, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.n_paths * cfg.n_steps));
}
BENCHMARK(BM_MonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
