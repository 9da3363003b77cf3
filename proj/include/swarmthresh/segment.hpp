#pragma once

#include <cstdint>
#include <vector>

#include "swarmthresh/image.hpp"
#include "swarmthresh/objectives.hpp"

namespace swarmthresh {

/// Class labels plus the class-mean reconstruction used by the quality
/// metrics. Pixel p belongs to class j iff t_j <= p < t_{j+1}, with t_0 = 0
/// and t_{m+1} = 256 (a pixel equal to a threshold goes to the upper
/// class). Empty classes get representative 0 and never appear in labels.
struct SegmentedImage {
    std::vector<std::uint8_t> labels; // row-major, in [0, m]
    GrayImage reconstructed;          // each pixel replaced by its class mean, rounded
    ThresholdVector thresholds;
    std::vector<double> class_means;  // arithmetic mean of original pixels, 0 if empty
};

SegmentedImage segment(const GrayImage &img, const ThresholdVector &t);

} // namespace swarmthresh
