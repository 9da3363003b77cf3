#include "swarmthresh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "swarmthresh/error.hpp"
#include "swarmthresh/histogram.hpp"
#include "swarmthresh/parallel.hpp"

namespace swarmthresh {

double mse(const GrayImage &original, const GrayImage &reconstructed) {
    if (original.width != reconstructed.width ||
        original.height != reconstructed.height)
        throw DimensionMismatch();

    const std::size_t n = original.pixels.size();
    const std::uint8_t *a = original.pixels.data();
    const std::uint8_t *b = reconstructed.pixels.data();
    // integer accumulation: exact, and identical for any thread count
    long long sum = 0;
#pragma omp parallel for num_threads(worker_count()) schedule(static) reduction(+ : sum)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const long long d = static_cast<long long>(a[i]) - b[i];
        sum += d * d;
    }
    return static_cast<double>(sum) / static_cast<double>(n);
}

double serial::mse(const GrayImage &original, const GrayImage &reconstructed) {
    if (original.width != reconstructed.width ||
        original.height != reconstructed.height)
        throw DimensionMismatch();
    double sum = 0.0;
    for (std::size_t i = 0; i < original.pixels.size(); ++i) {
        const double d = static_cast<double>(original.pixels[i]) -
                         static_cast<double>(reconstructed.pixels[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(original.pixels.size());
}

double psnr(double mse_value) {
    if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(255.0 / std::sqrt(mse_value));
}

double uniformity(const SegmentedImage &seg, const GrayImage &original, int m) {
    const Histogram hist = build_histogram(original);

    int f_min = 0, f_max = kLevels - 1;
    while (f_min < kLevels - 1 && hist.counts[f_min] == 0) ++f_min;
    while (f_max > 0 && hist.counts[f_max] == 0) --f_max;
    if (f_max <= f_min) return 1.0; // constant image: zero dispersion

    // within-class sum of squares straight from the histogram bins
    double ss = 0.0;
    int a = 0;
    for (int j = 0; j <= seg.thresholds.m(); ++j) {
        const int b = j < seg.thresholds.m() ? seg.thresholds.values[j] : kLevels;
        const double mu = seg.class_means[j];
        for (int v = a; v < b; ++v) {
            if (hist.counts[v] == 0) continue;
            const double d = static_cast<double>(v) - mu;
            ss += static_cast<double>(hist.counts[v]) * d * d;
        }
        a = b;
    }

    const double range = static_cast<double>(f_max - f_min);
    const double u = 1.0 - 2.0 * static_cast<double>(m) * ss /
                               (static_cast<double>(hist.total) * range * range);
    return std::clamp(u, 0.0, 1.0);
}

double serial::uniformity(const SegmentedImage &seg, const GrayImage &original,
                          int m) {
    std::uint8_t f_min = 255, f_max = 0;
    for (std::uint8_t v : original.pixels) {
        if (v < f_min) f_min = v;
        if (v > f_max) f_max = v;
    }
    if (f_max <= f_min) return 1.0;

    double ss = 0.0;
    for (std::size_t i = 0; i < original.pixels.size(); ++i) {
        const double d = static_cast<double>(original.pixels[i]) -
                         seg.class_means[seg.labels[i]];
        ss += d * d;
    }
    const double range = static_cast<double>(f_max) - static_cast<double>(f_min);
    const double u =
        1.0 - 2.0 * static_cast<double>(m) * ss /
                  (static_cast<double>(original.pixels.size()) * range * range);
    return std::clamp(u, 0.0, 1.0);
}

double misclassification_error(double u) { return (1.0 - u) * 100.0; }

double run_std(std::span<const double> best_fitnesses) {
    const std::size_t n = best_fitnesses.size();
    if (n == 0) return 0.0;
    // shifted two-pass: identical inputs give exactly zero instead of the
    // accumulation noise a naive mean would leave behind
    const double pivot = best_fitnesses[0];
    double mean = 0.0;
    for (double v : best_fitnesses) mean += v - pivot;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : best_fitnesses) {
        const double d = (v - pivot) - mean;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(n));
}

MetricReport compute_metrics(const GrayImage &original, const SegmentedImage &seg,
                             double maximization_fitness) {
    MetricReport r;
    r.mse = mse(original, seg.reconstructed);
    r.psnr_db = psnr(r.mse);
    r.uniformity = uniformity(seg, original, seg.thresholds.m());
    r.misclassification_pct = misclassification_error(r.uniformity);
    r.fitness = maximization_fitness;
    return r;
}

} // namespace swarmthresh
