// SPDX-License-Identifier: Apache-2.0
//
// Seeded random number generation. All distributions are implemented on top
// of the raw mt19937_64 stream so that identical seeds produce identical
// draws on every platform (std::normal_distribution and friends are
// implementation-defined and must not be used anywhere in the library).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace ajcdma {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Counter-style seed split: folds a list of words into the master seed.
/// Each word is mixed independently, so a sub-seed depends only on the
/// master seed and the identifying words, never on enumeration order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t w : words)
        h = splitmix64(h ^ splitmix64(w));
    return h;
}

/// Bit pattern of a double, for hashing real-valued sweep parameters.
inline std::uint64_t seed_word(double v) {
    // normalize -0.0 so it seeds identically to 0.0
    if (v == 0.0) v = 0.0;
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    return bits;
}

/// Deterministic generator with hand-rolled distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53 significant bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; the paired draw is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Circularly-symmetric complex normal with unit variance E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

    /// Antipodal bit, +1 or -1 with equal probability.
    int sign_bit() { return (gen_() >> 63) ? 1 : -1; }

    /// Uniform integer in [0, n), n >= 1. Rejection-free Lemire reduction is
    /// avoided on purpose: the simple modulo bias at n << 2^64 is far below
    /// anything observable, and the draw stays a single generator call.
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

    /// k distinct values from {0, ..., n-1}, uniform without replacement
    /// (partial Fisher-Yates, selection order preserved).
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
            out.push_back(pool[static_cast<std::size_t>(i)]);
        }
        return out;
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ajcdma
