#pragma once

#include <cstdint>

namespace kelsim {

/**
 * Counter-based 64-bit generator.
 *
 * The n-th output for a given seed is a pure function of (seed, n):
 *
 *     x = seed + (n + 1) * 0x9E3779B97F4A7C15      (mod 2^64)
 *     x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
 *     x = (x ^ (x >> 27)) * 0x94D049BB133111EB
 *     x =  x ^ (x >> 31)
 *
 * i.e. the SplitMix64 finalizer applied to a Weyl sequence. Only integer
 * arithmetic is involved, so streams are bit-identical on every platform.
 * Doubles use the top 53 bits: uniform() = (x >> 11) * 2^-53, in [0, 1).
 */
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    /// Output at an absolute position; does not touch the internal counter.
    [[nodiscard]] std::uint64_t at(std::uint64_t index) const;

    std::uint64_t next_u64() { return at(counter_++); }

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t position() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Derives an independent stream seed from a parent seed and a stream index.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

}  // namespace kelsim
