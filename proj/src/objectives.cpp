#include "swarmthresh/objectives.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace swarmthresh {

const char *to_string(Objective o) {
    return o == Objective::otsu ? "otsu" : "kapur";
}

ObjectiveSpec make_objective(Objective kind, const Histogram &h) {
    ObjectiveSpec spec;
    spec.kind = kind;
    spec.moments = prefix_moments(h);
    spec.mu_t = spec.moments.total_mean();
    return spec;
}

namespace {

inline double otsu_class_score(const PrefixMoments &pm, double mu_t, int a, int b) {
    const double w = pm.mass(a, b);
    if (w == 0.0) return 0.0;
    const double mu = pm.first(a, b) / w;
    const double d = mu - mu_t;
    return w * d * d;
}

inline double kapur_class_score(const PrefixMoments &pm, int a, int b) {
    const double w = pm.mass(a, b);
    if (w == 0.0) return 0.0;
    // -sum (p/w) ln(p/w) = ln w - (sum p ln p) / w; the clamp absorbs the
    // one-ulp negatives a single-bin class can produce.
    const double h = std::log(w) - pm.plogp(a, b) / w;
    return h > 0.0 ? h : 0.0;
}

// Sums class scores left to right over the boundaries 0, t1, ..., tm, 256.
// Every consumer (fitness, oracles) funnels through this order, so equal
// threshold vectors always produce bit-identical fitness values.
template <typename Score>
double sum_classes(const ThresholdVector &t, Score &&score) {
    double acc = 0.0;
    int a = 0;
    for (int b : t.values) {
        acc += score(a, b);
        a = b;
    }
    acc += score(a, kLevels);
    return acc;
}

} // namespace

double class_score(const ObjectiveSpec &spec, int a, int b) {
    return spec.kind == Objective::otsu
               ? otsu_class_score(spec.moments, spec.mu_t, a, b)
               : kapur_class_score(spec.moments, a, b);
}

double otsu_fitness(const ObjectiveSpec &spec, const ThresholdVector &t) {
    assert(spec.kind == Objective::otsu);
    return sum_classes(t, [&](int a, int b) {
        return otsu_class_score(spec.moments, spec.mu_t, a, b);
    });
}

double kapur_fitness(const ObjectiveSpec &spec, const ThresholdVector &t) {
    assert(spec.kind == Objective::kapur);
    return sum_classes(t, [&](int a, int b) {
        return kapur_class_score(spec.moments, a, b);
    });
}

double fitness(const ObjectiveSpec &spec, const ThresholdVector &t) {
    return spec.kind == Objective::otsu ? otsu_fitness(spec, t)
                                        : kapur_fitness(spec, t);
}

double minimization_fitness(const ObjectiveSpec &spec, const ThresholdVector &t) {
    return -fitness(spec, t);
}

ThresholdVector decode_position(std::span<const double> raw) {
    ThresholdVector t;
    t.values.reserve(raw.size());
    for (double x : raw) {
        const double c = std::clamp(x, 0.0, double(kLevels - 1));
        t.values.push_back(static_cast<int>(std::lround(c)));
    }
    std::sort(t.values.begin(), t.values.end());
    return t;
}

} // namespace swarmthresh
