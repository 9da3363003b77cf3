#pragma once

#include <array>
#include <cstdint>

#include "swarmthresh/image.hpp"

namespace swarmthresh {

/// 256-bin intensity histogram with its normalized probability view.
struct Histogram {
    std::array<std::uint64_t, kLevels> counts{};
    std::uint64_t total = 0;
    std::array<double, kLevels> prob{};
};

/// Cumulative sums over the probability histogram, so any class [a, b)
/// has O(1) mass, mean numerator and entropy numerator:
///   mass(a,b)  = cum_prob[b]  - cum_prob[a]
///   first(a,b) = cum_first[b] - cum_first[a]      (sum of i * p_i)
///   plogp(a,b) = cum_plogp[b] - cum_plogp[a]      (sum of p_i * ln p_i)
/// Index k covers bins [0, k), k = 0..256.
struct PrefixMoments {
    std::array<double, kLevels + 1> cum_prob{};
    std::array<double, kLevels + 1> cum_first{};
    std::array<double, kLevels + 1> cum_plogp{};

    double mass(int a, int b) const { return cum_prob[b] - cum_prob[a]; }
    double first(int a, int b) const { return cum_first[b] - cum_first[a]; }
    double plogp(int a, int b) const { return cum_plogp[b] - cum_plogp[a]; }
    double total_mean() const { return cum_first[kLevels]; }
};

/// Counts pixel intensities. Throws EmptyImage on a zero-pixel image.
Histogram build_histogram(const GrayImage &img);

PrefixMoments prefix_moments(const Histogram &h);

namespace serial {
/// Plain single-threaded counting loop, kept as the reference for tests
/// and the benchmark.
Histogram build_histogram(const GrayImage &img);
} // namespace serial

} // namespace swarmthresh
