#include "nile.hpp"

#include <algorithm>

#include "depreg/errors.hpp"
#include "depreg/hurst.hpp"
#include "depreg/partition_regression.hpp"

namespace depreg::app {

std::size_t nile_m_max(std::size_t n) {
    return std::clamp<std::size_t>(n / 5, 1, kNileMaxCells);
}

namespace {

NileMethodReport analyse(std::span<const double> y, MethodKind kind, std::size_t m_max,
                         std::span<const double> contrasts) {
    NileMethodReport report;
    report.spec.kind = kind;
    report.spec.degree = 0;
    report.spec.m_max = m_max;
    report.result = run_method(y, report.spec, contrasts);
    try {
        report.residual_hurst = whittle_estimate(report.result.residuals).hurst;
    } catch (const NumericalError& e) {
        throw PipelineError("whittle(final residuals)", e.what());
    }
    const std::size_t lags = std::min(kNileAcfLags, y.size() - 1);
    try {
        report.residual_acf = sample_acf(report.result.residuals, lags);
    } catch (const InputError& e) {
        throw PipelineError("acf", e.what());
    }
    return report;
}

}  // namespace

NileReport nile_analysis(const SeriesFile& series) {
    const std::size_t n = series.size();
    if (n < 64) {
        throw InputError("the analysis needs at least 64 observations, got " +
                         std::to_string(n));
    }
    NileReport report;
    report.series = series;
    report.m_max = nile_m_max(n);
    std::vector<double> contrasts;
    try {
        contrasts = contrast_curve(series.values, 0, report.m_max);
    } catch (const NumericalError& e) {
        throw PipelineError("contrast", e.what());
    }
    report.cdj = analyse(series.values, MethodKind::Cdj, report.m_max, contrasts);
    report.whywhres = analyse(series.values, MethodKind::WhYWhRes, report.m_max, contrasts);
    return report;
}

}  // namespace depreg::app
