#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace swarmthresh {

/// Deterministic random stream: std::mt19937_64 (output sequence is pinned
/// by the standard) with the usual 53-bit mapping to doubles. Identical
/// seeds give identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// FNV-1a 64-bit, used to derive stable per-run seeds from run coordinates.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace swarmthresh
