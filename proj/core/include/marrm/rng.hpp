#pragma once

#include "marrm/lognormal.hpp"

#include <cstdint>

// Counter-based random numbers keyed by (seed, stream, index). Sample i
// depends only on that key, so common random numbers across optimizer
// iterations are exact and output is identical regardless of evaluation
// order or worker count.
namespace marrm::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum class Stream : std::uint64_t {
    wealth = 1,
    loss = 2,
    garch = 3,
    trial = 4,
};

constexpr std::uint64_t stream_base(std::uint64_t seed, Stream stream) {
    return mix64(seed ^ mix64(static_cast<std::uint64_t>(stream) * kGamma));
}

constexpr std::uint64_t word_at(std::uint64_t base, std::uint64_t index) {
    return mix64(base + (index + 1) * kGamma);
}

// Uniform draw in the open interval (0,1).
inline double uniform_at(std::uint64_t base, std::uint64_t index) {
    return (static_cast<double>(word_at(base, index) >> 11) + 0.5) * 0x1.0p-53;
}

// Standard Gaussian via the inverse CDF, preserving the monotone coupling
// between the uniform and the Gaussian draw.
inline double gaussian_at(std::uint64_t base, std::uint64_t index) {
    return normal_quantile(uniform_at(base, index));
}

// Sequential convenience wrapper over one stream.
class Sequence {
public:
    Sequence(std::uint64_t seed, Stream stream, std::uint64_t start = 0)
        : base_(stream_base(seed, stream)), next_(start) {}

    double uniform() { return uniform_at(base_, next_++); }
    double gaussian() { return gaussian_at(base_, next_++); }
    // Uniform over [0, n).
    std::uint64_t index(std::uint64_t n) { return word_at(base_, next_++) % n; }

private:
    std::uint64_t base_;
    std::uint64_t next_;
};

} // namespace marrm::rng
