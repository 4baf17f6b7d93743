#pragma once

#include <cstdint>
#include <random>

namespace depreg {

/// SplitMix64 finalizer; a bijection on 64-bit integers.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of a simulation stream. Replicate streams are derived with
/// derive(i) = splitmix64(value + 0x9E3779B97F4A7C15 * (i + 1)).
class Seed {
public:
    constexpr explicit Seed(std::uint64_t value = 0) noexcept : value_(value) {}

    constexpr std::uint64_t value() const noexcept { return value_; }
    Seed derive(std::uint64_t index) const noexcept;

    friend constexpr bool operator==(Seed, Seed) = default;

private:
    std::uint64_t value_;
};

/**
 * Platform-stable random stream: std::mt19937_64 (fully specified by the
 * standard) seeded with splitmix64(seed). Uniforms are ((x >> 11) + 0.5) / 2^53
 * and normals are inverse-CDF transforms of one uniform each, so every draw
 * consumes exactly one engine output.
 */
class Rng {
public:
    explicit Rng(Seed seed) : engine_(splitmix64(seed.value())) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;
    /// Standard normal.
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace depreg
