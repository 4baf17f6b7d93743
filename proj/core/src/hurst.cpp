#include "depreg/hurst.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "depreg/errors.hpp"
#include "fft.hpp"

namespace depreg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw InputError("Hurst exponent must lie in (0, 1), got " + std::to_string(hurst));
    }
}

// Sum over |j| > terms of |lambda + 2 pi j|^{-a}: midpoint integral from
// terms + 1/2 plus the f'/24 Euler-Maclaurin term, for both tails.
double alias_tail(double lambda, double a, int terms) {
    const double x0 = kTwoPi * (static_cast<double>(terms) + 0.5);
    const double up = x0 + lambda;
    const double down = x0 - lambda;
    const double integral =
        (std::pow(up, 1.0 - a) + std::pow(down, 1.0 - a)) / (kTwoPi * (a - 1.0));
    const double derivative = -a * kTwoPi * (std::pow(up, -a - 1.0) + std::pow(down, -a - 1.0));
    return integral + derivative / 24.0;
}

// Per-frequency data reused across Whittle objective evaluations: the
// log-distances log|lambda + 2 pi j| turn every aliasing power into one exp.
class FgnSpectralTable {
public:
    FgnSpectralTable(std::span<const double> frequencies, int terms)
        : frequencies_(frequencies.begin(), frequencies.end()),
          terms_(terms),
          width_(static_cast<std::size_t>(2 * terms + 1)),
          log_distance_(frequencies.size() * width_) {
        for (std::size_t f = 0; f < frequencies_.size(); ++f) {
            for (int j = -terms; j <= terms; ++j) {
                log_distance_[f * width_ + static_cast<std::size_t>(j + terms)] =
                    std::log(std::abs(frequencies_[f] + kTwoPi * j));
            }
        }
    }

    std::size_t size() const noexcept { return frequencies_.size(); }

    double density(std::size_t f, double hurst) const {
        const double a = 2.0 * hurst + 1.0;
        const double* logs = &log_distance_[f * width_];
        double sum = 0.0;
        for (std::size_t k = 0; k < width_; ++k) {
            sum += std::exp(-a * logs[k]);
        }
        sum += alias_tail(frequencies_[f], a, terms_);
        return 2.0 * (1.0 - std::cos(frequencies_[f])) * sum;
    }

private:
    std::vector<double> frequencies_;
    int terms_;
    std::size_t width_;
    std::vector<double> log_distance_;
};

struct ObjectiveValue {
    double objective;
    double scale;
};

ObjectiveValue evaluate(const FgnSpectralTable& table, std::span<const double> ordinates,
                        double hurst) {
    double ratio_sum = 0.0;
    double log_sum = 0.0;
    for (std::size_t f = 0; f < table.size(); ++f) {
        const double g = table.density(f, hurst);
        ratio_sum += ordinates[f] / g;
        log_sum += std::log(g);
    }
    const double count = static_cast<double>(table.size());
    const double scale = ratio_sum / count;
    return {std::log(scale) + log_sum / count, scale};
}

}  // namespace

Periodogram periodogram(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 8) {
        throw InputError("periodogram needs at least 8 observations, got " + std::to_string(n));
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    std::vector<double> centered(n);
    std::transform(x.begin(), x.end(), centered.begin(), [mean](double v) { return v - mean; });

    const auto dft = detail::real_dft(centered);
    const std::size_t count = (n - 1) / 2;
    Periodogram out;
    out.n = n;
    out.frequencies.resize(count);
    out.ordinates.resize(count);
    const double norm = kTwoPi * static_cast<double>(n);
    for (std::size_t j = 1; j <= count; ++j) {
        out.frequencies[j - 1] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        out.ordinates[j - 1] = std::norm(dft[j]) / norm;
    }
    return out;
}

double fgn_spectral_density(double hurst, double lambda, int terms) {
    check_hurst(hurst);
    if (!(lambda > 0.0 && lambda <= std::numbers::pi)) {
        throw InputError("frequency must lie in (0, pi], got " + std::to_string(lambda));
    }
    if (terms < 1) {
        throw InputError("aliasing sum needs at least one term");
    }
    const double a = 2.0 * hurst + 1.0;
    double sum = 0.0;
    for (int j = -terms; j <= terms; ++j) {
        sum += std::pow(std::abs(lambda + kTwoPi * j), -a);
    }
    sum += alias_tail(lambda, a, terms);
    return 2.0 * (1.0 - std::cos(lambda)) * sum;
}

double whittle_objective(const Periodogram& pgram, double hurst, int alias_terms) {
    check_hurst(hurst);
    const FgnSpectralTable table(pgram.frequencies, alias_terms);
    return evaluate(table, pgram.ordinates, hurst).objective;
}

WhittleFit whittle_estimate(std::span<const double> x, const WhittleOptions& options) {
    const std::size_t n = x.size();
    if (n < 64) {
        throw InputError("Whittle estimation needs at least 64 observations, got " +
                         std::to_string(n));
    }
    if (!(options.lower > 0.0 && options.lower < options.upper && options.upper < 1.0)) {
        throw InputError("Whittle search interval must satisfy 0 < lower < upper < 1");
    }

    // Standardizing first makes the estimate exactly invariant to affine maps.
    double mean = 0.0;
    double peak = 0.0;
    for (double v : x) {
        mean += v;
        peak = std::max(peak, std::abs(v));
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    const double variance = ss / static_cast<double>(n);
    if (!(variance > 1e-24 * std::max(peak * peak, 1e-300))) {
        throw NumericalError("all periodogram ordinates are zero (constant input)");
    }
    const double sd = std::sqrt(variance);
    std::vector<double> standardized(n);
    std::transform(x.begin(), x.end(), standardized.begin(),
                   [mean, sd](double v) { return (v - mean) / sd; });

    const Periodogram pgram = periodogram(standardized);
    const FgnSpectralTable table(pgram.frequencies, options.alias_terms);
    auto objective = [&](double h) { return evaluate(table, pgram.ordinates, h).objective; };

    constexpr int kScanPoints = 5;
    std::array<double, kScanPoints> grid{};
    std::size_t best = 0;
    double best_value = 0.0;
    for (int k = 0; k < kScanPoints; ++k) {
        grid[static_cast<std::size_t>(k)] =
            options.lower + (options.upper - options.lower) * k / (kScanPoints - 1);
        const double value = objective(grid[static_cast<std::size_t>(k)]);
        if (k == 0 || value < best_value) {
            best_value = value;
            best = static_cast<std::size_t>(k);
        }
    }
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min<std::size_t>(best + 1, kScanPoints - 1)];

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > options.tolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    const double hurst = 0.5 * (a + b);
    const ObjectiveValue at = evaluate(table, pgram.ordinates, hurst);

    WhittleFit fit;
    fit.hurst = hurst;
    fit.objective = at.objective;
    fit.scale = at.scale * variance;
    fit.lower = options.lower;
    fit.upper = options.upper;
    fit.at_boundary = hurst - options.lower < 2.0 * options.tolerance ||
                      options.upper - hurst < 2.0 * options.tolerance;
    return fit;
}

std::vector<double> sample_acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) {
        throw InputError("ACF lag " + std::to_string(max_lag) + " must be below n = " +
                         std::to_string(n));
    }
    double mean = 0.0;
    for (double v : x) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) {
        denom += (v - mean) * (v - mean);
    }
    if (!(denom > 0.0)) {
        throw InputError("ACF of a zero-variance series is undefined");
    }
    std::vector<double> acf(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            num += (x[t] - mean) * (x[t + k] - mean);
        }
        acf[k] = num / denom;
    }
    return acf;
}

}  // namespace depreg
