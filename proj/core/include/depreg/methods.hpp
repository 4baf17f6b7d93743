#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depreg/partition_regression.hpp"

namespace depreg {

/**
 * End-to-end partition-size selection strategies, all calibrated by the
 * dimension jump:
 *   Cdj        shape d_m / n
 *   HGiven     shape (d_m / n)^{2 - 2H} with H supplied
 *   WhY        H estimated by Whittle on the observations
 *   CdjWhRes   Cdj pre-model, H from Whittle on its residuals
 *   WhYWhRes   WhY pre-model, H from Whittle on its residuals
 */
enum class MethodKind { Cdj, HGiven, WhY, CdjWhRes, WhYWhRes };

struct MethodSpec {
    MethodKind kind = MethodKind::Cdj;
    /// Only used by HGiven.
    double hurst = 0.5;
    int degree = 0;
    /// 0 selects default_m_max(n, degree).
    std::size_t m_max = 0;

    /// Lower-case identifier: cdj, hgiven(0.7), why, cdjwhres, whywhres.
    std::string name() const;
};

/// Parses "cdj", "hgiven:0.7" (or "hgiven(0.7)"), "why", "cdjwhres", "whywhres".
MethodSpec parse_method(const std::string& text, int degree = 0, std::size_t m_max = 0);

/// Hurst estimates are clamped to this range before building a power shape.
inline constexpr double kHurstClampLow = 0.05;
inline constexpr double kHurstClampHigh = 0.95;

struct MethodResult {
    std::size_t m_selected = 0;
    double kappa_dj = 0.0;
    /// Pre-model of the two-step methods.
    std::optional<std::size_t> pre_model;
    /// Raw Whittle estimates in pipeline order (H1 then H2).
    std::vector<double> hurst_estimates;
    PiecewiseFit fit;
    std::vector<double> residuals;
};

/// Runs one strategy. Failures are rethrown as PipelineError naming the
/// stage ("whittle(y)", "dimension-jump(pre)", ...).
MethodResult run_method(std::span<const double> y, const MethodSpec& spec);

/// Same, reusing contrasts already computed for m = 1..m_max.
MethodResult run_method(std::span<const double> y, const MethodSpec& spec,
                        std::span<const double> contrasts);

}  // namespace depreg
