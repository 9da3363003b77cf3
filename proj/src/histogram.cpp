#include "swarmthresh/histogram.hpp"

#include <cmath>
#include <vector>

#include "swarmthresh/error.hpp"
#include "swarmthresh/parallel.hpp"

namespace swarmthresh {

namespace {

Histogram finalize(std::array<std::uint64_t, kLevels> counts, std::uint64_t total) {
    Histogram h;
    h.counts = counts;
    h.total = total;
    const double n = static_cast<double>(total);
    for (int i = 0; i < kLevels; ++i)
        h.prob[i] = static_cast<double>(counts[i]) / n;
    return h;
}

} // namespace

Histogram build_histogram(const GrayImage &img) {
    const std::size_t n = img.pixels.size();
    if (n == 0) throw EmptyImage();

    std::array<std::uint64_t, kLevels> counts{};
    const std::uint8_t *px = img.pixels.data();
#pragma omp parallel num_threads(worker_count())
    {
        std::array<std::uint64_t, kLevels> local{};
#pragma omp for nowait
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            ++local[px[i]];
#pragma omp critical(swarmthresh_histogram_merge)
        for (int b = 0; b < kLevels; ++b)
            counts[b] += local[b];
    }
    return finalize(counts, n);
}

Histogram serial::build_histogram(const GrayImage &img) {
    if (img.pixels.empty()) throw EmptyImage();
    std::array<std::uint64_t, kLevels> counts{};
    for (std::uint8_t v : img.pixels)
        ++counts[v];
    return finalize(counts, img.pixels.size());
}

PrefixMoments prefix_moments(const Histogram &h) {
    PrefixMoments pm;
    double w = 0.0, m = 0.0, e = 0.0;
    pm.cum_prob[0] = pm.cum_first[0] = pm.cum_plogp[0] = 0.0;
    for (int i = 0; i < kLevels; ++i) {
        const double p = h.prob[i];
        w += p;
        m += static_cast<double>(i) * p;
        if (p > 0.0) e += p * std::log(p); // 0 ln 0 -> 0
        pm.cum_prob[i + 1] = w;
        pm.cum_first[i + 1] = m;
        pm.cum_plogp[i + 1] = e;
    }
    return pm;
}

} // namespace swarmthresh
