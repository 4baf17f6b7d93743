#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace depreg::detail {

namespace {

// fftw_plan_* and fftw_destroy_plan are not thread-safe; fftw_execute is.
std::mutex& planner_mutex() {
    static std::mutex mutex;
    return mutex;
}

struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using Buffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
Buffer<T> allocate(std::size_t count) {
    return Buffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1))));
}

}  // namespace

std::vector<std::complex<double>> real_dft(std::span<const double> x) {
    const auto n = static_cast<int>(x.size());
    const std::size_t half = x.size() / 2 + 1;
    auto in = allocate<double>(x.size());
    auto out = allocate<fftw_complex>(half);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE));
    }
    std::copy(x.begin(), x.end(), in.get());
    fftw_execute(plan.get());
    std::vector<std::complex<double>> result(half);
    for (std::size_t j = 0; j < half; ++j) {
        result[j] = {out[j][0], out[j][1]};
    }
    return result;
}

std::vector<double> inverse_real_dft(std::span<const std::complex<double>> half, std::size_t n) {
    auto in = allocate<fftw_complex>(n / 2 + 1);
    auto out = allocate<double>(n);
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
    }
    for (std::size_t j = 0; j <= n / 2; ++j) {
        in[j][0] = half[j].real();
        in[j][1] = half[j].imag();
    }
    fftw_execute(plan.get());
    return std::vector<double>(out.get(), out.get() + n);
}

std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x) {
    const auto n = static_cast<int>(x.size());
    auto in = allocate<fftw_complex>(x.size());
    auto out = allocate<fftw_complex>(x.size());
    Plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan.reset(fftw_plan_dft_1d(n, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        in[i][0] = x[i].real();
        in[i][1] = x[i].imag();
    }
    fftw_execute(plan.get());
    std::vector<std::complex<double>> result(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        result[j] = {out[j][0], out[j][1]};
    }
    return result;
}

}  // namespace depreg::detail
