#pragma once

#include <cstdint>

namespace frec {

// SplitMix64 finalizer. Bijective scramble of a 64-bit word; the counter
// generator below feeds it (seed + golden-ratio * counter), so draw k of a
// stream is a pure function of (seed, k).
std::uint64_t mix64(std::uint64_t x);

// Derives an independent stream seed from a master seed and two indices
// (e.g. grid cell and trial number). Collision-resistant enough for
// experiment bookkeeping, not for cryptography.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Counter-mode SplitMix64 stream with Box-Muller Gaussians on top.
// Deterministic across platforms for a fixed seed.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();

    // uniform draw in [0, 1), 53 mantissa bits
    double uniform();

    // standard normal; generates pairs and caches the second value
    double gaussian();

    // uniform integer in [0, n), unbiased via rejection
    std::uint64_t below(std::uint64_t n);

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace frec
