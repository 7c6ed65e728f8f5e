#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "geozeta/euler.hpp"
#include "geozeta/hadamard.hpp"
#include "geozeta/reference.hpp"
#include "geozeta/spectra.hpp"

using namespace geozeta;

namespace {

const LengthSpectrum& bench_spectrum() {
    static const LengthSpectrum s = generate_length_spectrum(3, 1.0, 7.0, 42, 0.05);
    return s;
}

EvalRequest bench_request() {
    EvalRequest req;
    req.s = {1.8, 0.9};
    req.zeta_kind = ZetaKind::symmetrized_s;
    req.sigma.weight_vector = {1};
    req.sigma.label = "bench";
    req.tail_tolerance = 1e-12;
    return req;
}

const ZeroSet& bench_zeros() {
    static const ZeroSet z = [] {
        std::vector<ZeroEntry> zeros;
        zeros.reserve(50000);
        for (int k = 1; k <= 50000; ++k) {
            const double r = std::pow(static_cast<double>(k), 1.0 / 3.0);
            zeros.push_back({std::polar(r, 2.39996322972865332 * k), 1});
        }
        return make_zero_set(std::move(zeros), 3);
    }();
    return z;
}

void BM_log_zeta_blocked(benchmark::State& state) {
    const LengthSpectrum& s = bench_spectrum();
    const EvalRequest req = bench_request();
    for (auto _ : state) {
        const EvalResult r = log_zeta(s, req);
        benchmark::DoNotOptimize(r.log_value);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(s.geodesics.size()));
}
BENCHMARK(BM_log_zeta_blocked);

void BM_log_zeta_serial_reference(benchmark::State& state) {
    const LengthSpectrum& s = bench_spectrum();
    const EvalRequest req = bench_request();
    for (auto _ : state) {
        const EvalResult r = reference::log_zeta_serial(s, req);
        benchmark::DoNotOptimize(r.log_value);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(s.geodesics.size()));
}
BENCHMARK(BM_log_zeta_serial_reference);

void BM_canonical_product_blocked(benchmark::State& state) {
    const ZeroSet& z = bench_zeros();
    const cdouble s{0.0, 2.0};
    for (auto _ : state) {
        const ProductResult r = canonical_product(z, 3, s, 1e-12);
        benchmark::DoNotOptimize(r.log_value);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(z.zeros.size()));
}
BENCHMARK(BM_canonical_product_blocked);

void BM_canonical_product_direct_reference(benchmark::State& state) {
    const ZeroSet& z = bench_zeros();
    const cdouble s{0.0, 2.0};
    for (auto _ : state) {
        const cdouble v = reference::direct_canonical_product(z, 3, s);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(z.zeros.size()));
}
BENCHMARK(BM_canonical_product_direct_reference);

} // namespace

BENCHMARK_MAIN();
