#include "depreg/processes.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Dense>

#include "depreg/errors.hpp"
#include "fft.hpp"

namespace depreg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const ProcessSpec& spec) {
    std::visit(overloaded{
                   [](const Arma21&) {},
                   [](const Fgn& p) {
                       if (!(p.hurst > 0.0 && p.hurst < 1.0)) {
                           throw InputError("FGN Hurst exponent must lie in (0, 1)");
                       }
                       if (!(p.sigma2 > 0.0)) {
                           throw InputError("FGN variance must be positive");
                       }
                   },
                   [](const DmrChain& p) {
                       if (!(p.a > 0.0)) {
                           throw InputError("DMR chain parameter a must be positive");
                       }
                   },
                   [](const WhiteNoise& p) {
                       if (!(p.sigma2 >= 0.0)) {
                           throw InputError("white-noise variance must be nonnegative");
                       }
                   },
               },
               spec);
}

std::string describe(const ProcessSpec& spec) {
    std::ostringstream out;
    std::visit(overloaded{
                   [&](const Arma21&) { out << "arma21"; },
                   [&](const Fgn& p) { out << "fgn(H=" << p.hurst << ",sigma2=" << p.sigma2 << ")"; },
                   [&](const DmrChain& p) { out << "dmr(a=" << p.a << ")"; },
                   [&](const WhiteNoise& p) { out << "white(sigma2=" << p.sigma2 << ")"; },
               },
               spec);
    return out.str();
}

std::vector<double> simulate_arma21(std::size_t n, Seed seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    double e1 = 0.0;  // e_{i-1}
    double e2 = 0.0;  // e_{i-2}
    double w1 = 0.0;  // W_{i-1}
    for (std::size_t i = 0; i < kArmaBurnIn + n; ++i) {
        const double w = rng.normal();
        const double e = 0.3 * e1 + 0.1 * e2 + w + 0.2 * w1;
        e2 = e1;
        e1 = e;
        w1 = w;
        if (i >= kArmaBurnIn) {
            out[i - kArmaBurnIn] = e;
        }
    }
    return out;
}

namespace {

std::vector<double> cholesky_sample(const AutocovarianceSequence& acv, std::size_t n,
                                    Rng& rng) {
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd t(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
        for (Eigen::Index j = 0; j < size; ++j) {
            t(i, j) = acv(static_cast<std::size_t>(std::abs(i - j)));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(t);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("Toeplitz covariance is not positive definite");
    }
    Eigen::VectorXd z(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        z(i) = rng.normal();
    }
    const Eigen::VectorXd x = llt.matrixL() * z;
    return {x.data(), x.data() + size};
}

}  // namespace

GaussianSimulation simulate_stationary_gaussian(const AutocovarianceSequence& acv,
                                                std::size_t n, Seed seed,
                                                GaussianSimOptions options) {
    if (n == 0) {
        return {};
    }
    if (acv.max_lag() + 1 < n) {
        throw InputError("simulation of length " + std::to_string(n) +
                         " needs autocovariances up to lag " + std::to_string(n - 1));
    }
    Rng rng(seed);
    if (n == 1) {
        return {{std::sqrt(acv(0)) * rng.normal()}, GaussianSynthesis::CirculantEmbedding};
    }

    const std::size_t size = 2 * (n - 1);
    std::vector<std::complex<double>> row(size);
    for (std::size_t k = 0; k < n; ++k) {
        row[k] = acv(k);
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        row[size - k] = acv(k);
    }
    const auto spectrum = detail::complex_dft(row);

    const double floor = -1e-10 * acv(0);
    bool embeddable = true;
    for (const auto& s : spectrum) {
        if (s.real() < floor) {
            embeddable = false;
            break;
        }
    }
    if (!embeddable) {
        if (n > options.dense_cap) {
            throw InputError("circulant embedding failed and n = " + std::to_string(n) +
                             " exceeds the dense fallback cap " +
                             std::to_string(options.dense_cap));
        }
        return {cholesky_sample(acv, n, rng), GaussianSynthesis::Cholesky};
    }

    std::vector<std::complex<double>> weighted(size);
    const double inv_size = 1.0 / static_cast<double>(size);
    for (std::size_t k = 0; k < size; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        const double amplitude = std::sqrt(std::max(spectrum[k].real(), 0.0) * inv_size);
        weighted[k] = amplitude * std::complex<double>(re, im);
    }
    // The real and imaginary parts of the transform are two independent
    // exact samples; the real part is returned.
    const auto field = detail::complex_dft(weighted);
    GaussianSimulation out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = field[i].real();
    }
    return out;
}

std::vector<double> simulate_fgn(std::size_t n, double hurst, double sigma2, Seed seed,
                                 GaussianSimOptions options) {
    validate(Fgn{hurst, sigma2});
    const auto acv = fgn_acv(hurst, sigma2, n == 0 ? 0 : n - 1);
    return simulate_stationary_gaussian(acv, n, seed, options).values;
}

std::vector<double> simulate_dmr_chain(std::size_t n, double a, Seed seed) {
    validate(DmrChain{a});
    Rng rng(seed);
    const double inv_a = 1.0 / a;
    const double inv_a1 = 1.0 / (1.0 + a);
    double z = std::pow(rng.uniform(), inv_a);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double stay = rng.uniform();
        const double fresh = rng.uniform();
        if (stay >= 1.0 - z) {
            z = std::pow(fresh, inv_a1);
        }
        out[i] = std::pow(z, a) - 0.5;
    }
    return out;
}

std::vector<double> simulate_white_noise(std::size_t n, double sigma2, Seed seed) {
    validate(WhiteNoise{sigma2});
    std::vector<double> out(n, 0.0);
    if (sigma2 == 0.0) {
        return out;
    }
    Rng rng(seed);
    const double sd = std::sqrt(sigma2);
    for (double& v : out) {
        v = sd * rng.normal();
    }
    return out;
}

std::vector<double> simulate_errors(std::size_t n, const ProcessSpec& spec, Seed seed) {
    validate(spec);
    return std::visit(
        overloaded{
            [&](const Arma21&) { return simulate_arma21(n, seed); },
            [&](const Fgn& p) { return simulate_fgn(n, p.hurst, p.sigma2, seed); },
            [&](const DmrChain& p) { return simulate_dmr_chain(n, p.a, seed); },
            [&](const WhiteNoise& p) { return simulate_white_noise(n, p.sigma2, seed); },
        },
        spec);
}

double target_signal(double t) {
    return 3.0 - 0.1 * t + 0.5 * t * t - t * t * t + std::sin(8.0 * t);
}

std::vector<double> signal_grid(std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 1; i <= n; ++i) {
        out[i - 1] = target_signal(static_cast<double>(i) / static_cast<double>(n));
    }
    return out;
}

std::vector<double> generate_observations(std::size_t n, const ProcessSpec& spec, Seed seed) {
    std::vector<double> y = simulate_errors(n, spec, seed);
    const std::vector<double> f = signal_grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += f[i];
    }
    return y;
}

}  // namespace depreg
