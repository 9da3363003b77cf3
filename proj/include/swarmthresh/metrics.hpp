#pragma once

#include <span>

#include "swarmthresh/image.hpp"
#include "swarmthresh/segment.hpp"

namespace swarmthresh {

struct MetricReport {
    double mse = 0.0;
    double psnr_db = 0.0; // +infinity when mse == 0
    double uniformity = 0.0;
    double misclassification_pct = 0.0;
    double fitness = 0.0;
};

/// Mean squared error between two images of equal size. Accumulated in
/// 64-bit integers, so the result is exact and independent of thread count.
/// Throws DimensionMismatch.
double mse(const GrayImage &original, const GrayImage &reconstructed);

/// 20 log10(255 / sqrt(mse)); +infinity for mse == 0.
double psnr(double mse_value);

/// Region-homogeneity measure in [0, 1]:
///   u = 1 - 2 m sum_j sum_{i in R_j} (f_i - mu_j)^2 / (N (f_max-f_min)^2)
/// with f_min/f_max taken from the original image. A constant image scores
/// 1. Computed from the intensity histogram, so it is deterministic and
/// O(levels) after counting.
double uniformity(const SegmentedImage &seg, const GrayImage &original, int m);

/// (1 - u) * 100, in percent.
double misclassification_error(double u);

/// Population standard deviation of per-run best fitnesses (divisor N),
/// two-pass to keep the tiny dispersions of repeated converged runs exact.
double run_std(std::span<const double> best_fitnesses);

/// Convenience bundle: mse/psnr/uniformity/me against a segmentation.
MetricReport compute_metrics(const GrayImage &original, const SegmentedImage &seg,
                             double maximization_fitness);

namespace serial {
/// Pixel-loop references (the production paths use integer reductions and
/// histogram arithmetic); kept for tests and the benchmark.
double mse(const GrayImage &original, const GrayImage &reconstructed);
double uniformity(const SegmentedImage &seg, const GrayImage &original, int m);
} // namespace serial

} // namespace swarmthresh
