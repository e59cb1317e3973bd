#include "maryland/arithmetics.hpp"
#include "maryland/closed_forms.hpp"
#include "maryland/cocycles.hpp"
#include "maryland/spectral_report.hpp"

#include <benchmark/benchmark.h>

using namespace maryland;

namespace {

const FrequencyCF& golden() {
    static FrequencyCF g = cf_expand("golden", 30);
    return g;
}

void BM_cocycle_product(benchmark::State& state) {
    const double a = golden().value_d();
    const long long n = state.range(0);
    for (auto _ : state) {
        CocycleMatrix P = product(CocycleKind::A, 1.0, 0.0, a, 0.13, 0.0, n);
        benchmark::DoNotOptimize(P.log_scale);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_cocycle_product)->Arg(1000)->Arg(100000);

void BM_sturm_count(benchmark::State& state) {
    Phase th = make_phase(rational_from_decimal("0.13"), golden());
    const long long N = state.range(0);
    for (auto _ : state) {
        double v = finite_volume_ids(1.0, golden(), th, 0.0, N);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(state.iterations() * (2 * N + 1));
}
BENCHMARK(BM_sturm_count)->Arg(500)->Arg(2000);

void BM_zeta_series(benchmark::State& state) {
    for (auto _ : state) {
        ZetaCoefficients z = zeta_coeffs(1.0, 0.7, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(z.zeta0);
    }
}
BENCHMARK(BM_zeta_series)->Arg(50)->Arg(400);

void BM_cf_expand_generated(benchmark::State& state) {
    for (auto _ : state) {
        FrequencyCF cf = cf_expand("cfgen:exp:2:6", 6);
        benchmark::DoNotOptimize(cf.declared_depth);
    }
}
BENCHMARK(BM_cf_expand_generated);

void BM_delta_index(benchmark::State& state) {
    Phase th = make_phase(rational_from_decimal("0.137"), golden());
    for (auto _ : state) {
        IndexEstimate d = delta_index(golden(), th, 29);
        benchmark::DoNotOptimize(d.value);
    }
}
BENCHMARK(BM_delta_index);

void BM_i_epsilon(benchmark::State& state) {
    for (auto _ : state) {
        double v = i_epsilon(0.0, 512);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_i_epsilon);

} // namespace

BENCHMARK_MAIN();
