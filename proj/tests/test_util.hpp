#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "swarmthresh/histogram.hpp"
#include "swarmthresh/image.hpp"
#include "swarmthresh/objectives.hpp"
#include "swarmthresh/rng.hpp"

namespace testutil {

using swarmthresh::GrayImage;
using swarmthresh::Histogram;
using swarmthresh::kLevels;
using swarmthresh::Rng;

inline Histogram histogram_from_counts(const std::array<std::uint64_t, kLevels> &counts) {
    Histogram h;
    h.counts = counts;
    for (auto c : counts) h.total += c;
    for (int i = 0; i < kLevels; ++i)
        h.prob[i] = static_cast<double>(counts[i]) / static_cast<double>(h.total);
    return h;
}

/// Mass 0.5 at bin 50 and 0.5 at bin 200 (100 + 100 pixels).
inline Histogram two_peak_histogram() {
    std::array<std::uint64_t, kLevels> c{};
    c[50] = 100;
    c[200] = 100;
    return histogram_from_counts(c);
}

/// One count in every bin: each prob exactly 1/256.
inline Histogram uniform_histogram() {
    std::array<std::uint64_t, kLevels> c{};
    c.fill(1);
    return histogram_from_counts(c);
}

inline Histogram single_bin_histogram(int bin = 100) {
    std::array<std::uint64_t, kLevels> c{};
    c[bin] = 1234;
    return histogram_from_counts(c);
}

/// Dense random histogram: every bin gets a count in [0, 100); roughly a
/// third of the bins are zeroed so empty classes show up.
inline Histogram random_histogram(Rng &rng) {
    std::array<std::uint64_t, kLevels> c{};
    for (int i = 0; i < kLevels; ++i) {
        const double u = rng.uniform01();
        c[i] = u < 0.33 ? 0 : static_cast<std::uint64_t>(rng.uniform(1.0, 100.0));
    }
    if (std::all_of(c.begin(), c.end(), [](auto v) { return v == 0; })) c[7] = 1;
    return histogram_from_counts(c);
}

/// Sparse support: mass on k random bins only.
inline Histogram sparse_histogram(Rng &rng, int k = 12) {
    std::array<std::uint64_t, kLevels> c{};
    for (int j = 0; j < k; ++j) {
        const int bin = static_cast<int>(rng.uniform(0.0, 256.0));
        c[std::min(bin, kLevels - 1)] += 1 + static_cast<std::uint64_t>(rng.uniform(0.0, 50.0));
    }
    return histogram_from_counts(c);
}

inline swarmthresh::ThresholdVector random_thresholds(Rng &rng, int m) {
    swarmthresh::ThresholdVector t;
    for (int i = 0; i < m; ++i)
        t.values.push_back(static_cast<int>(rng.uniform(0.0, 256.0)) % 256);
    std::sort(t.values.begin(), t.values.end());
    return t;
}

inline int clamp_pixel(double v) {
    return std::clamp(static_cast<int>(std::lround(v)), 0, 255);
}

inline double gaussian(Rng &rng, double mean, double sd) {
    // Box-Muller; one draw per call is fine for fixtures
    const double u1 = std::max(rng.uniform01(), 1e-12);
    const double u2 = rng.uniform01();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

/// Dark background with a bright disk: clean bimodal histogram.
inline GrayImage synth_bimodal(int w = 256, int h = 256, std::uint64_t seed = 11) {
    Rng rng(seed);
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    const double cx = w / 2.0, cy = h / 2.0, r = std::min(w, h) / 3.5;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool inside = (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
            const double v = inside ? gaussian(rng, 185.0, 9.0) : gaussian(rng, 55.0, 8.0);
            img.pixels[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint8_t>(clamp_pixel(v));
        }
    return img;
}

/// Four horizontal bands at well separated mean levels.
inline GrayImage synth_bands(int w = 256, int h = 256, std::uint64_t seed = 12) {
    Rng rng(seed);
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    const double means[4] = {35.0, 100.0, 165.0, 228.0};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double v = gaussian(rng, means[(y * 4) / h], 7.0);
            img.pixels[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint8_t>(clamp_pixel(v));
        }
    return img;
}

/// Concentric rings, brain-slice-ish intensity structure.
inline GrayImage synth_rings(int w = 256, int h = 256, std::uint64_t seed = 13) {
    Rng rng(seed);
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    const double cx = w / 2.0, cy = h / 2.0;
    const double rmax = std::min(w, h) / 2.0;
    const double means[4] = {20.0, 90.0, 150.0, 215.0};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
            const int ring = std::min(3, static_cast<int>(d / rmax * 4.0));
            const double v = gaussian(rng, means[3 - ring], 6.0);
            img.pixels[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint8_t>(clamp_pixel(v));
        }
    return img;
}

/// Noise-free horizontal ramp: nearly flat histogram.
inline GrayImage synth_ramp(int w = 256, int h = 256) {
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.pixels[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint8_t>(x * (kLevels - 1) / (w - 1));
    return img;
}

/// Three-component mixture texture.
inline GrayImage synth_texture(int w = 256, int h = 256, std::uint64_t seed = 14) {
    Rng rng(seed);
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (auto &p : img.pixels) {
        const double pick = rng.uniform01();
        const double v = pick < 0.45   ? gaussian(rng, 48.0, 8.0)
                         : pick < 0.80 ? gaussian(rng, 132.0, 9.0)
                                       : gaussian(rng, 212.0, 7.0);
        p = static_cast<std::uint8_t>(clamp_pixel(v));
    }
    return img;
}

inline GrayImage random_image(Rng &rng, int w = 64, int h = 48) {
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (auto &p : img.pixels)
        p = static_cast<std::uint8_t>(static_cast<int>(rng.uniform(0.0, 256.0)) % 256);
    return img;
}

/// Scratch directory under the system temp dir, unique per tag.
inline std::string temp_dir(const std::string &tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("swarmthresh_test_" + tag);
    std::filesystem::create_directories(dir);
    return dir.string();
}

} // namespace testutil
