#pragma once

#include <complex>
#include <span>
#include <vector>

namespace depreg::detail {

/// Non-negative-frequency half of the DFT sum_t x_t exp(-2 pi i j t / n),
/// j = 0..n/2.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

/// Real sequence of length n whose non-negative-frequency DFT half is
/// `half` (n/2 + 1 entries), without the 1/n normalisation.
std::vector<double> inverse_real_dft(std::span<const std::complex<double>> half, std::size_t n);

/// Full forward DFT sum_t x_t exp(-2 pi i j t / n).
std::vector<std::complex<double>> complex_dft(std::span<const std::complex<double>> x);

}  // namespace depreg::detail
