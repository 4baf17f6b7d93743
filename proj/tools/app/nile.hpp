#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "depreg/methods.hpp"
#include "series_io.hpp"

namespace depreg::app {

inline constexpr std::size_t kNileAcfLags = 40;
inline constexpr std::size_t kNileMaxCells = 200;

struct NileMethodReport {
    MethodSpec spec;
    MethodResult result;
    /// Whittle estimate on the residuals of the selected model.
    double residual_hurst = 0.0;
    /// Residual autocorrelations at lags 0..kNileAcfLags.
    std::vector<double> residual_acf;
};

struct NileReport {
    SeriesFile series;
    std::size_t m_max = 0;
    NileMethodReport cdj;
    NileMethodReport whywhres;
};

/// m_max for the two-method comparison: floor(n/5), at most 200.
std::size_t nile_m_max(std::size_t n);

/// Runs CDJ and WhYWhRes with piecewise constants on the series.
NileReport nile_analysis(const SeriesFile& series);

}  // namespace depreg::app
