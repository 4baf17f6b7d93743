#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace depreg {

/// Periodogram at the Fourier frequencies 2 pi j / n, j = 1..floor((n-1)/2),
/// of the mean-removed series. The zero frequency and, for even n, the
/// Nyquist frequency are excluded.
struct Periodogram {
    std::vector<double> frequencies;
    std::vector<double> ordinates;
    std::size_t n = 0;
};

/// I(lambda_j) = |sum_t (x_t - mean) exp(-i t lambda_j)|^2 / (2 pi n).
Periodogram periodogram(std::span<const double> x);

/// Number of aliasing terms on each side of the FGN spectral sum.
inline constexpr int kFgnAliasTerms = 100;

/**
 * Unit-scale FGN spectral density shape
 *   g_H(lambda) = 2 (1 - cos lambda) sum_j |lambda + 2 pi j|^{-2H-1},
 * with the sum truncated at |j| <= terms and the remainder replaced by its
 * integral plus a first Euler-Maclaurin correction.
 */
double fgn_spectral_density(double hurst, double lambda, int terms = kFgnAliasTerms);

struct WhittleOptions {
    double lower = 0.01;
    double upper = 0.99;
    double tolerance = 1e-4;
    int alias_terms = kFgnAliasTerms;
};

struct WhittleFit {
    double hurst = 0.5;
    double objective = 0.0;
    /// Profiled scale: mean of I(lambda_j) / g_H(lambda_j) in data units.
    double scale = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    /// Estimate sits on the edge of the search interval.
    bool at_boundary = false;
};

/// Profiled Whittle objective log(mean(I/g_H)) + mean(log g_H) for FGN.
double whittle_objective(const Periodogram& pgram, double hurst,
                         int alias_terms = kFgnAliasTerms);

/**
 * FGN Whittle estimate of the Hurst exponent. A 5-point scan of the search
 * interval brackets the minimum, which golden-section search then refines.
 * Requires n >= 64; a constant series raises NumericalError.
 */
WhittleFit whittle_estimate(std::span<const double> x, const WhittleOptions& options = {});

/// Sample autocorrelations at lags 0..max_lag.
std::vector<double> sample_acf(std::span<const double> x, std::size_t max_lag);

}  // namespace depreg
