#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace simrel {

/// Reproducible randomness: std::mt19937_64 seeded with the raw 64-bit seed.
/// Bounded draws use rejection sampling on the raw 64-bit output, so the
/// stream of values is identical on every platform and standard library
/// (the std:: distributions do not give that guarantee).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        std::uint64_t x = engine_();
        while (x > limit) {
            x = engine_();
        }
        return x % bound;
    }

    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Fisher-Yates.
    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace simrel
