#include <benchmark/benchmark.h>

#include <random>

#include "depreg/covariance.hpp"
#include "depreg/hurst.hpp"
#include "depreg/methods.hpp"
#include "depreg/partition_regression.hpp"
#include "depreg/processes.hpp"
#include "depreg/selection.hpp"

using namespace depreg;

static void BM_ContrastCurve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const auto y = generate_observations(n, Fgn{0.7, 1.0}, Seed(1));
    const std::size_t m_max = std::min<std::size_t>(200, n / (5 * (degree + 1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(contrast_curve(y, degree, m_max));
    }
}
BENCHMARK(BM_ContrastCurve)->Args({2000, 0})->Args({2000, 1})->Args({10000, 0})->Unit(benchmark::kMillisecond);

static void BM_TraceProjection(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const int degree = static_cast<int>(state.range(1));
    const auto cov = CovarianceModel::toeplitz(fgn_acv(0.7, 1.0, n - 1), n);
    std::size_t m = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_projection(cov, PartitionModel(n, m, degree)));
        m = m % 200 + 1;
    }
}
BENCHMARK(BM_TraceProjection)->Args({2000, 0})->Args({2000, 1})->Args({2000, 2});

static void BM_SpectralRadius(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto cov = CovarianceModel::toeplitz(fgn_acv(0.3, 1.0, n - 1), n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_radius(cov));
    }
}
BENCHMARK(BM_SpectralRadius)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_WhittleEstimate(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = simulate_fgn(n, 0.7, 1.0, Seed(2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(whittle_estimate(x));
    }
}
BENCHMARK(BM_WhittleEstimate)->Arg(663)->Arg(2000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_RegularizationPath(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> contrasts(count);
    std::vector<double> shapes(count);
    double c = 1.0;
    for (std::size_t k = 0; k < count; ++k) {
        c -= 0.5 * u(gen) / static_cast<double>(count);
        contrasts[k] = c;
        shapes[k] = static_cast<double>(k + 1);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(regularization_path(contrasts, shapes));
    }
}
BENCHMARK(BM_RegularizationPath)->Arg(50)->Arg(200)->Arg(1000);

static void BM_SimulateFgn(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_fgn(n, 0.7, 1.0, Seed(seed++)));
    }
}
BENCHMARK(BM_SimulateFgn)->Arg(2000)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

static void BM_RunMethod(benchmark::State& state) {
    const auto y = generate_observations(2000, Fgn{0.7, 1.0}, Seed(4));
    const MethodSpec spec = parse_method(state.range(0) == 0 ? "cdj" : "whywhres");
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_method(y, spec));
    }
}
BENCHMARK(BM_RunMethod)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
