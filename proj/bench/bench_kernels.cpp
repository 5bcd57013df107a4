// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "l2w/kernels.hpp"
#include "l2w/sidon.hpp"

using namespace l2w;

namespace {

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> v(n);
    for (auto& x : v) x = Complex{g(rng), g(rng)};
    return v;
}

void BM_fft(benchmark::State& st, Exec e) {
    const auto src = random_vector(static_cast<std::size_t>(st.range(0)), 1);
    auto a = src;
    for (auto _ : st) {
        a = src;
        kernels::fft(a, -1, e);
        benchmark::DoNotOptimize(a.data());
    }
    st.SetComplexityN(st.range(0));
}

void BM_convolve(benchmark::State& st, Exec e) {
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    const auto a = random_vector(n, 2), b = random_vector(n, 3);
    std::vector<Complex> out(2 * n - 1);
    for (auto _ : st) {
        kernels::convolve(a, b, out, e);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_sidon(benchmark::State& st, Exec e) {
    std::vector<long long> g;
    for (long long i = 1; i <= st.range(0); ++i) g.push_back(i);
    for (auto _ : st) benchmark::DoNotOptimize(count_by_enumeration(0, g, e));
}

}  // namespace

BENCHMARK_CAPTURE(BM_fft, serial, Exec::serial)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK_CAPTURE(BM_fft, parallel, Exec::parallel)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK_CAPTURE(BM_convolve, serial, Exec::serial)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK_CAPTURE(BM_convolve, parallel, Exec::parallel)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK_CAPTURE(BM_sidon, serial, Exec::serial)->DenseRange(8, 14, 2);
BENCHMARK_CAPTURE(BM_sidon, parallel, Exec::parallel)->DenseRange(8, 14, 2);

BENCHMARK_MAIN();
