#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tsreason {

/// Deterministic random source for data generation and randomized tests.
///
/// std::mt19937_64's integer stream is pinned by the standard, but the
/// <random> distributions are not, so every floating point draw here is
/// derived with fixed arithmetic. Identical seeds therefore produce identical
/// datasets on any conforming toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive. Masked rejection, no modulo bias.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(gen_());
        std::uint64_t mask = span - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        std::uint64_t draw = gen_() & mask;
        while (draw >= span) draw = gen_() & mask;
        return lo + static_cast<std::int64_t>(draw);
    }

    /// Standard normal via Box-Muller. No cached spare: one call, one value,
    /// so the draw sequence is easy to reproduce in oracles. The angle below
    /// spans two turns; modulo the circle it is still uniform, and generated
    /// datasets are frozen against this exact stream, so keep it as is.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kTwoPi * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;
    std::mt19937_64 gen_;
};

/// splitmix64 finalizer; decorrelates structured integers into seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable per-instance seed derived from a master seed, a label (family name)
/// and an index. FNV-1a over the label keeps it platform independent.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return mix64(master ^ mix64(h ^ mix64(index)));
}

}  // namespace tsreason
