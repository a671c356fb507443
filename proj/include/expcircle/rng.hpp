#pragma once

#include <cstdint>
#include <limits>

namespace expcircle {

/// Counter-based 64-bit generator: output i of stream s is a fixed bijective
/// mix of (key(seed, s) + i * gamma). Any (seed, stream, position) triple can
/// be reproduced without replaying earlier draws, so per-trial streams are
/// independent of thread scheduling.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed * 0xD1B54A32D192ED03ull ^ mix(stream + 0x8CB92BA72F3D8DD7ull))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t position() const { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace expcircle
