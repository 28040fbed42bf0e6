#pragma once

#include <cstdint>
#include <limits>

namespace uavg {

/// Counter-keyed SplitMix64 stream. Stream (seed, index) is a pure function
/// of its key, so Monte Carlo sample i draws the same numbers no matter which
/// worker evaluates it. Satisfies UniformRandomBitGenerator.
class SampleStream {
public:
    using result_type = std::uint64_t;

    SampleStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : state_(mix(master_seed ^ mix(stream_index + 0x632BE59BD9B4E019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Independent child stream, e.g. for encoder noise next to gate noise.
    SampleStream fork(std::uint64_t tag) { return SampleStream((*this)(), tag); }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace uavg
