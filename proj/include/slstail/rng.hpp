#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace slstail {

/// SplitMix64 finalizer. Used for seeding and for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a over bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seed of the `index`-th task with role `tag` under `master`:
///   mix64(mix64(mix64(master) ^ fnv1a64(tag)) ^ index)
/// Every task in a plan gets its own stream; the value depends on nothing else.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index) noexcept
{
    return mix64(mix64(mix64(master) ^ fnv1a64(tag)) ^ index);
}

/// xoshiro256** seeded through SplitMix64. Satisfies UniformRandomBitGenerator.
///
/// All sampling helpers below are implemented here rather than through the
/// <random> distributions so that a seed produces the same stream on every
/// standard library.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform_open() noexcept;
    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;
    bool bernoulli(double p) noexcept;
    bool coin() noexcept { return ((*this)() >> 63) != 0; }
    /// Standard normal via the Marsaglia polar method.
    double normal() noexcept;
    double exponential(double rate) noexcept;
    /// Binomial(n, p) by geometric skipping; O(n * min(p, 1-p) + 1).
    std::uint64_t binomial(std::uint64_t n, double p) noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace slstail
