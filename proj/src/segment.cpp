#include "swarmthresh/segment.hpp"

#include <array>
#include <cmath>

#include "swarmthresh/histogram.hpp"
#include "swarmthresh/parallel.hpp"

namespace swarmthresh {

SegmentedImage segment(const GrayImage &img, const ThresholdVector &t) {
    const int m = t.m();
    const std::size_t n = img.pixels.size();

    // label of intensity v = number of thresholds <= v; a value equal to a
    // threshold belongs to the upper class, duplicates skip the empty one
    std::array<std::uint8_t, kLevels> label_of{};
    {
        int j = 0;
        for (int v = 0; v < kLevels; ++v) {
            while (j < m && t.values[j] <= v) ++j;
            label_of[v] = static_cast<std::uint8_t>(j);
        }
    }

    // per-class mean of the original intensities, from the histogram so the
    // result does not depend on pixel order or thread count
    const Histogram hist = build_histogram(img);
    std::vector<double> means(m + 1, 0.0);
    {
        int a = 0;
        for (int j = 0; j <= m; ++j) {
            const int b = j < m ? t.values[j] : kLevels;
            std::uint64_t cnt = 0, sum = 0;
            for (int v = a; v < b; ++v) {
                cnt += hist.counts[v];
                sum += hist.counts[v] * static_cast<std::uint64_t>(v);
            }
            means[j] = cnt ? static_cast<double>(sum) / static_cast<double>(cnt) : 0.0;
            a = b;
        }
    }

    std::array<std::uint8_t, kLevels> repr{};
    for (int v = 0; v < kLevels; ++v)
        repr[v] = static_cast<std::uint8_t>(std::lround(means[label_of[v]]));

    SegmentedImage seg;
    seg.thresholds = t;
    seg.class_means = std::move(means);
    seg.labels.resize(n);
    seg.reconstructed.width = img.width;
    seg.reconstructed.height = img.height;
    seg.reconstructed.pixels.resize(n);

    const std::uint8_t *px = img.pixels.data();
    std::uint8_t *lab = seg.labels.data();
    std::uint8_t *rec = seg.reconstructed.pixels.data();
#pragma omp parallel for num_threads(worker_count()) schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        lab[i] = label_of[px[i]];
        rec[i] = repr[px[i]];
    }
    return seg;
}

} // namespace swarmthresh
