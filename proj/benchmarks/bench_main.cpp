#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "stable_stein/bounds.hpp"
#include "stable_stein/kernels.hpp"
#include "stable_stein/sampling.hpp"
#include "stable_stein/special.hpp"
#include "stable_stein/stable_density.hpp"
#include "stable_stein/tables.hpp"
#include "stable_stein/wasserstein.hpp"

using namespace stable_stein;

static void BM_DAlphaGamma(benchmark::State& st) {
    double a = 1.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(D_alpha_gamma(a, 0.5));
        a = a < 1.9 ? a + 1e-3 : 1.1;
    }
}
BENCHMARK(BM_DAlphaGamma);

static void BM_Table2(benchmark::State& st) {
    const auto al = default_alpha_grid();
    const auto ga = default_gamma_grid();
    for (auto _ : st) benchmark::DoNotOptimize(table2(al, ga));
}
BENCHMARK(BM_Table2);

static void BM_Figure1(benchmark::State& st) {
    const auto al = figure1_alpha_grid();
    for (auto _ : st) benchmark::DoNotOptimize(figure1(1e6, al));
}
BENCHMARK(BM_Figure1)->Unit(benchmark::kMillisecond);

static void BM_Density(benchmark::State& st) {
    const StableLaw law(1.5);
    double x = 0.0;
    for (auto _ : st) {
        benchmark::DoNotOptimize(density(law, x));
        x = x < 30.0 ? x + 0.37 : 0.0;
    }
}
BENCHMARK(BM_Density);

static void BM_DiscrepancyQuadrature(benchmark::State& st) {
    const auto s = DistributionSpec::modified_pareto_balanced(1.5, 2.5);
    for (auto _ : st) benchmark::DoNotOptimize(discrepancy_l1(s, 1e4, 10.0, KernelBackend::quadrature));
}
BENCHMARK(BM_DiscrepancyQuadrature)->Unit(benchmark::kMillisecond);

static void BM_SampleSum(benchmark::State& st) {
    const auto s = DistributionSpec::pareto(1.5);
    for (auto _ : st) benchmark::DoNotOptimize(sample_sum(s, 1000, 10000, 1));
    st.SetItemsProcessed(st.iterations() * 1000 * 10000);
}
BENCHMARK(BM_SampleSum)->Unit(benchmark::kMillisecond);

static void BM_OneSampleW1(benchmark::State& st) {
    const auto v = sample_stable_sorted(1.5, 100000, 3, StreamTag::user);
    const StableLaw law(1.5);
    for (auto _ : st) benchmark::DoNotOptimize(w1_one_sample(v, law));
}
BENCHMARK(BM_OneSampleW1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
