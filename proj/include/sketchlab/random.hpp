#pragma once

#include <cstdint>

namespace sketchlab {

/// SplitMix64 finalizer; a bijective avalanche mix on 64 bits.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Pure function of (seed, stream, counter). Every random quantity in the
/// library is derived from this, so results depend only on seeds and never
/// on evaluation order or thread count.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;

/// Maps 64 random bits to the open interval (0, 1).
double unit_open(std::uint64_t bits) noexcept;

/// Standard normal variate addressed by (seed, stream, index) (Box-Muller, cosine branch).
double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

/// Sequential view over the counter-based generator.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() noexcept { return counter_hash(seed_, stream_, counter_++); }
    double uniform() noexcept { return unit_open(next_u64()); }
    double normal() noexcept;
    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Independent generator keyed by `stream` under this generator's seed.
    Rng split(std::uint64_t stream) const noexcept { return Rng(mix64(seed_ ^ mix64(stream_)), stream); }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sketchlab
