#pragma once

#include <cstdint>
#include <vector>

namespace cofix {

/// Deterministic 64-bit generator (splitmix64). Identical sequences on every
/// platform for a given seed, which keeps seeded runs byte-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform-ish draw in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    bool coin() { return next() & 1; }

    /// True with probability percent/100.
    bool percent(std::uint64_t percent) { return below(100) < percent; }

    template <typename T>
    const T& pick(const std::vector<T>& xs) {
        return xs[below(xs.size())];
    }

private:
    std::uint64_t state_;
};

} // namespace cofix
