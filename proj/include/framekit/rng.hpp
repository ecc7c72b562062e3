#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace framekit {

/// Counter-based generator: every draw is a pure function of (key, counter),
/// so results do not depend on evaluation order and streams can be split
/// for independent consumers. The mixer is SplitMix64's finalizer.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ kStreamSalt)) {}

    /// Independent child stream; splitting is deterministic in (parent, stream).
    constexpr CounterRng split(std::uint64_t stream) const noexcept {
        CounterRng child(0);
        child.key_ = mix(key_ ^ mix(stream + kGolden));
        return child;
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix(key_ + (counter + 1) * kGolden);
    }

    /// Uniform in [0, 1).
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t counter, double lo, double hi) const noexcept {
        return lo + (hi - lo) * uniform(counter);
    }

    /// Standard normal via Box-Muller on counters (2c, 2c+1).
    double normal(std::uint64_t counter) const noexcept {
        const double u1 = 1.0 - uniform(2 * counter);  // (0, 1]
        const double u2 = uniform(2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, n); n must be positive.
    constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t n) const noexcept {
        return static_cast<std::uint64_t>(uniform(counter) * static_cast<double>(n)) % n;
    }

    constexpr std::uint64_t key() const noexcept { return key_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

/// Sequential convenience wrapper: walks the counter of a CounterRng.
class RngStream {
public:
    explicit RngStream(CounterRng rng) noexcept : rng_(rng) {}
    explicit RngStream(std::uint64_t seed) noexcept : rng_(seed) {}

    double uniform() noexcept { return rng_.uniform(next_++); }
    double uniform(double lo, double hi) noexcept { return rng_.uniform(next_++, lo, hi); }
    double normal() noexcept { return rng_.normal(next_++); }
    std::uint64_t below(std::uint64_t n) noexcept { return rng_.below(next_++, n); }
    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) noexcept { return lo + below(hi - lo + 1); }
    bool coin() noexcept { return (rng_.bits(next_++) & 1U) != 0; }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

}  // namespace framekit
