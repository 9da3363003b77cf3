#pragma once

#include <span>
#include <string>
#include <vector>

#include "swarmthresh/histogram.hpp"

namespace swarmthresh {

enum class Objective { otsu, kapur };

const char *to_string(Objective o);

/// m integer thresholds, sorted ascending, each in [0, 255]. Duplicates are
/// allowed; they induce empty classes that score zero.
struct ThresholdVector {
    std::vector<int> values;

    int m() const { return static_cast<int>(values.size()); }
    bool operator==(const ThresholdVector &) const = default;
};

/// Everything needed to score a candidate in O(m): the criterion plus the
/// prefix sums of the image histogram.
struct ObjectiveSpec {
    Objective kind = Objective::otsu;
    PrefixMoments moments;
    double mu_t = 0.0; // global mean, == moments.cum_first[256]
};

ObjectiveSpec make_objective(Objective kind, const Histogram &h);

/// Score contributed by the class covering bins [a, b). A class with zero
/// probability mass contributes exactly 0.
///   otsu : w * (mu - mu_T)^2
///   kapur: -sum_{i in [a,b)} (p_i/w) ln(p_i/w), never negative
double class_score(const ObjectiveSpec &spec, int a, int b);

/// Between-class variance over the m+1 classes induced by T (maximization).
double otsu_fitness(const ObjectiveSpec &spec, const ThresholdVector &t);

/// Sum of per-class entropies over the m+1 classes induced by T
/// (maximization). Bins with zero probability contribute 0 (x ln x -> 0).
double kapur_fitness(const ObjectiveSpec &spec, const ThresholdVector &t);

/// Dispatches on spec.kind.
double fitness(const ObjectiveSpec &spec, const ThresholdVector &t);

/// The sign-flipped fitness consumed by the minimizing optimizers.
double minimization_fitness(const ObjectiveSpec &spec, const ThresholdVector &t);

/// Maps a continuous position to thresholds: clamp each coordinate to
/// [0, 255], round to nearest (half away from zero), sort ascending.
ThresholdVector decode_position(std::span<const double> raw);

} // namespace swarmthresh
