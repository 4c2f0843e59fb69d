#pragma once

// SplitMix64 streams. Every random quantity in the suite (weights, synthetic
// graphs, synthetic features) comes from a stream keyed by (seed, tag, index)
// so results are reproducible bit for bit on any platform.

#include <cstdint>
#include <string_view>

namespace gsuite {

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a, used to turn stream role names into tags.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Stream seed for (seed, role, index).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view role,
                                    std::uint64_t index = 0) noexcept
{
    return mix64(seed ^ mix64(fnv1a64(role) ^ mix64(index)));
}

class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform in [0, 1) from the top 53 bits.
    constexpr double next_unit() noexcept
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    constexpr double next_uniform(double lo, double hi) noexcept
    {
        return lo + (hi - lo) * next_unit();
    }

private:
    std::uint64_t state_;
};

} // namespace gsuite
