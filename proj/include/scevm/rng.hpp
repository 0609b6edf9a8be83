// SPDX-License-Identifier: Apache-2.0
#ifndef SCEVM_RNG_HPP
#define SCEVM_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace scevm::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

struct RngSeed {
    std::uint64_t value = 0x5C0FFEEULL;
    bool operator==(const RngSeed&) const = default;
};

/// xoshiro256** keyed by (seed, stream). Distinct streams are decorrelated by
/// hashing the pair through splitmix64 before filling the state.
///
/// All variate generators are written out here rather than taken from
/// <random> so that output bits do not depend on the standard library.
class Rng {
public:
    Rng(RngSeed seed, std::uint64_t stream) noexcept {
        std::uint64_t key = splitmix64(seed.value) ^ splitmix64(stream * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
        for (auto& word : state_) {
            key = splitmix64(key);
            word = key;
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_zero() noexcept { return 1.0 - uniform(); }

    /// Standard normal by Box-Muller; the second value of each pair is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_zero()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal() noexcept {
        constexpr double half_sqrt2 = 0.70710678118654752440;
        const double re = normal();
        const double im = normal();
        return {half_sqrt2 * re, half_sqrt2 * im};
    }

    /// Unit-mean exponential.
    double exponential() noexcept { return -std::log(uniform_open_zero()); }

    /// Gamma(shape, scale 1) by Marsaglia-Tsang squeeze/rejection; shape < 1
    /// uses Gamma(shape + 1) * U^{1/shape}.
    double gamma(double shape) noexcept {
        if (shape < 1.0) {
            const double boosted = gamma(shape + 1.0);
            return boosted * std::pow(uniform_open_zero(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = 0.0;
            double v = 0.0;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_open_zero();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace scevm::rng

#endif // SCEVM_RNG_HPP
