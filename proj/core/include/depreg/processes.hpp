#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "depreg/covariance.hpp"
#include "depreg/rng.hpp"

namespace depreg {

/// Gaussian ARMA(2,1): e_i - 0.3 e_{i-1} - 0.1 e_{i-2} = W_i + 0.2 W_{i-1}.
struct Arma21 {};

/// Fractional Gaussian noise with Hurst exponent in (0, 1).
struct Fgn {
    double hurst = 0.5;
    double sigma2 = 1.0;
};

/// Stationary Markov chain on [0, 1] observed through Z^a - 0.5; long memory
/// for a < 1, short memory for a > 1.
struct DmrChain {
    double a = 1.0;
};

struct WhiteNoise {
    double sigma2 = 1.0;
};

using ProcessSpec = std::variant<Arma21, Fgn, DmrChain, WhiteNoise>;

/// Throws InputError if parameters are out of domain.
void validate(const ProcessSpec& spec);
std::string describe(const ProcessSpec& spec);

inline constexpr std::size_t kArmaBurnIn = 1000;

std::vector<double> simulate_arma21(std::size_t n, Seed seed);

enum class GaussianSynthesis { CirculantEmbedding, Cholesky };

struct GaussianSimulation {
    std::vector<double> values;
    GaussianSynthesis method = GaussianSynthesis::CirculantEmbedding;
};

struct GaussianSimOptions {
    /// Largest n for which the dense Cholesky fallback is attempted.
    std::size_t dense_cap = 8192;
};

/**
 * Exact stationary Gaussian sample with the given autocovariances. Uses the
 * circulant embedding of size 2(n-1); if any embedding eigenvalue is below
 * -1e-10 gamma(0), falls back to a Cholesky factor of the dense Toeplitz
 * matrix (InputError beyond options.dense_cap).
 */
GaussianSimulation simulate_stationary_gaussian(const AutocovarianceSequence& acv,
                                                std::size_t n, Seed seed,
                                                GaussianSimOptions options = {});

std::vector<double> simulate_fgn(std::size_t n, double hurst, double sigma2, Seed seed,
                                 GaussianSimOptions options = {});

/// Z_0 ~ pi (density a x^{a-1}); each step keeps Z with probability 1 - Z,
/// otherwise redraws from nu (density (1+a) x^a). Returns Z_i^a - 0.5,
/// i = 1..n. Every step consumes two uniforms.
std::vector<double> simulate_dmr_chain(std::size_t n, double a, Seed seed);

std::vector<double> simulate_white_noise(std::size_t n, double sigma2, Seed seed);

std::vector<double> simulate_errors(std::size_t n, const ProcessSpec& spec, Seed seed);

/// 3 - 0.1 t + 0.5 t^2 - t^3 + sin(8 t).
double target_signal(double t);

/// target_signal(i / n) for i = 1..n.
std::vector<double> signal_grid(std::size_t n);

/// Y_i = target_signal(i / n) + e_i.
std::vector<double> generate_observations(std::size_t n, const ProcessSpec& spec, Seed seed);

}  // namespace depreg
