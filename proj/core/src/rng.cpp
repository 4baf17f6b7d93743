#include "depreg/rng.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace depreg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Seed Seed::derive(std::uint64_t index) const noexcept {
    return Seed(splitmix64(value_ + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

double Rng::uniform() noexcept {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double Rng::normal() {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform());
}

}  // namespace depreg
