#pragma once

#include <cstdint>

#include "tlab/errors.hpp"

namespace tlab {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words,
// so distinct inputs always map to distinct outputs.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Identifies one reproducible random stream within a run: the stream key is a
// pure function of (master_seed, task_index), and distinct task indices give
// distinct keys (multiplication by the odd gamma is injective mod 2^64 and
// mix64 is a bijection).
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t task_index = 0;

    std::uint64_t stream_key() const {
        return mix64(mix64(master_seed) + kGoldenGamma * (task_index + 1));
    }
};

// Counter-based generator: output i is mix64(key + i * gamma), i.e. the
// SplitMix64 sequence seeded at the stream key. Word-exact on every platform.
class CounterRng {
public:
    explicit CounterRng(SeedSpec spec) : state_(spec.stream_key()) {}
    CounterRng(std::uint64_t master_seed, std::uint64_t task_index)
        : CounterRng(SeedSpec{master_seed, task_index}) {}

    std::uint64_t next_u64() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform in [0, bound) by fixed-threshold rejection; bound = 0 is invalid.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw ValidationError("CounterRng::next_below: bound must be positive");
        if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
        const std::uint64_t limit = bound * (~0ULL / bound);
        for (;;) {
            std::uint64_t v = next_u64();
            if (v < limit) return v % bound;
        }
    }

    // Uniform in [0,1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double q) { return next_double() < q; }

private:
    std::uint64_t state_;
};

}  // namespace tlab
