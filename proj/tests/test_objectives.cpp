#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "swarmthresh/objectives.hpp"
#include "test_util.hpp"

using namespace swarmthresh;

namespace {

// brute-force single-threshold scan used as the oracle for the frozen values
double best_single_threshold(const ObjectiveSpec &spec, int *argmax = nullptr) {
    double best = -1.0;
    int arg = -1;
    for (int t = 0; t < kLevels; ++t) {
        ThresholdVector tv{{t}};
        const double v = fitness(spec, tv);
        if (v > best) {
            best = v;
            arg = t;
        }
    }
    if (argmax) *argmax = arg;
    return best;
}

} // namespace

TEST_CASE("otsu on the two-peak histogram: closed-form value") {
    const ObjectiveSpec spec =
        make_objective(Objective::otsu, testutil::two_peak_histogram());
    // 0.5 (50 - 125)^2 + 0.5 (200 - 125)^2
    CHECK(otsu_fitness(spec, ThresholdVector{{120}}) == 5625.0);
    CHECK(minimization_fitness(spec, ThresholdVector{{120}}) == -5625.0);

    int arg = -1;
    CHECK(best_single_threshold(spec, &arg) == 5625.0);
    // the whole plateau between the peaks attains it
    for (int t = 51; t <= 200; ++t)
        CHECK(otsu_fitness(spec, ThresholdVector{{t}}) == 5625.0);
    CHECK(otsu_fitness(spec, ThresholdVector{{50}}) < 5625.0);
}

TEST_CASE("otsu with an empty first class collapses to zero") {
    Rng rng(501);
    const ObjectiveSpec spec =
        make_objective(Objective::otsu, testutil::random_histogram(rng));
    CHECK(otsu_fitness(spec, ThresholdVector{{0}}) == 0.0);
}

TEST_CASE("kapur on the uniform histogram peaks at the midpoint") {
    const ObjectiveSpec spec =
        make_objective(Objective::kapur, testutil::uniform_histogram());
    const double expected = 2.0 * std::log(128.0);
    CHECK(kapur_fitness(spec, ThresholdVector{{128}}) ==
          doctest::Approx(expected).epsilon(1e-12));

    int arg = -1;
    const double best = best_single_threshold(spec, &arg);
    CHECK(arg == 128);
    CHECK(best == doctest::Approx(expected).epsilon(1e-12));
    CHECK(minimization_fitness(spec, ThresholdVector{{128}}) ==
          doctest::Approx(-expected).epsilon(1e-12));
}

TEST_CASE("kapur of a single-bin histogram is zero for any thresholds") {
    const ObjectiveSpec spec =
        make_objective(Objective::kapur, testutil::single_bin_histogram());
    CHECK(kapur_fitness(spec, ThresholdVector{{7}}) == 0.0);
    CHECK(kapur_fitness(spec, ThresholdVector{{100, 200}}) == 0.0);
    const ObjectiveSpec otsu =
        make_objective(Objective::otsu, testutil::single_bin_histogram());
    CHECK(otsu_fitness(otsu, ThresholdVector{{7}}) == 0.0);
}

TEST_CASE("decode_position clamps, rounds half away from zero, sorts") {
    const std::vector<double> a{99.4, 34.6};
    CHECK(decode_position(a).values == std::vector<int>{35, 99});
    const std::vector<double> b{-3.0, 300.0};
    CHECK(decode_position(b).values == std::vector<int>{0, 255});
    const std::vector<double> c{100.0, 100.2};
    CHECK(decode_position(c).values == std::vector<int>{100, 100});
    const std::vector<double> d{42.5};
    CHECK(decode_position(d).values == std::vector<int>{43});
}

TEST_CASE("fitness ignores the order of the raw position vector") {
    Rng rng(502);
    for (int iter = 0; iter < 50; ++iter) {
        const Histogram h = testutil::random_histogram(rng);
        for (Objective kind : {Objective::otsu, Objective::kapur}) {
            const ObjectiveSpec spec = make_objective(kind, h);
            std::vector<double> raw;
            for (int i = 0; i < 4; ++i) raw.push_back(rng.uniform(0.0, 255.0));
            std::vector<double> shuffled = raw;
            std::reverse(shuffled.begin(), shuffled.end());
            std::swap(shuffled[0], shuffled[1]);
            CHECK(fitness(spec, decode_position(raw)) ==
                  fitness(spec, decode_position(shuffled)));
        }
    }
}

TEST_CASE("m=1 otsu equals the bi-level two-class form") {
    Rng rng(503);
    for (int iter = 0; iter < 20; ++iter) {
        const Histogram h = testutil::random_histogram(rng);
        const ObjectiveSpec spec = make_objective(Objective::otsu, h);
        for (int t = 0; t < kLevels; t += 5) {
            // direct two-class computation from the raw probabilities
            double w0 = 0, m0 = 0, w1 = 0, m1 = 0;
            for (int i = 0; i < t; ++i) {
                w0 += h.prob[i];
                m0 += i * h.prob[i];
            }
            for (int i = t; i < kLevels; ++i) {
                w1 += h.prob[i];
                m1 += i * h.prob[i];
            }
            double expected = 0.0;
            if (w0 > 0) expected += w0 * (m0 / w0 - spec.mu_t) * (m0 / w0 - spec.mu_t);
            if (w1 > 0) expected += w1 * (m1 / w1 - spec.mu_t) * (m1 / w1 - spec.mu_t);
            CHECK(otsu_fitness(spec, ThresholdVector{{t}}) ==
                  doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("between-class plus within-class variance equals total variance") {
    Rng rng(504);
    for (int iter = 0; iter < 200; ++iter) {
        const Histogram h = testutil::random_histogram(rng);
        const ObjectiveSpec spec = make_objective(Objective::otsu, h);
        const int m = 1 + static_cast<int>(rng.uniform(0.0, 5.0));
        const ThresholdVector t = testutil::random_thresholds(rng, m);

        double total_var = 0.0;
        for (int i = 0; i < kLevels; ++i)
            total_var += h.prob[i] * (i - spec.mu_t) * (i - spec.mu_t);

        double within = 0.0;
        int a = 0;
        for (int j = 0; j <= t.m(); ++j) {
            const int b = j < t.m() ? t.values[j] : kLevels;
            double w = 0, first = 0;
            for (int i = a; i < b; ++i) {
                w += h.prob[i];
                first += i * h.prob[i];
            }
            if (w > 0) {
                const double mu = first / w;
                for (int i = a; i < b; ++i)
                    within += h.prob[i] * (i - mu) * (i - mu);
            }
            a = b;
        }
        CHECK(otsu_fitness(spec, t) + within ==
              doctest::Approx(total_var).epsilon(1e-6));
    }
}

TEST_CASE("kapur fitness stays within its entropy bounds") {
    Rng rng(505);
    for (int iter = 0; iter < 100; ++iter) {
        const Histogram h = iter % 2 ? testutil::random_histogram(rng)
                                     : testutil::sparse_histogram(rng);
        const ObjectiveSpec spec = make_objective(Objective::kapur, h);
        const int m = 1 + static_cast<int>(rng.uniform(0.0, 5.0));
        const ThresholdVector t = testutil::random_thresholds(rng, m);
        const double v = kapur_fitness(spec, t);
        CHECK(v >= 0.0);
        CHECK(v <= std::log(256.0) * (m + 1));
    }
}

TEST_CASE("a duplicated threshold never changes the fitness") {
    Rng rng(506);
    for (int iter = 0; iter < 50; ++iter) {
        const Histogram h = testutil::random_histogram(rng);
        for (Objective kind : {Objective::otsu, Objective::kapur}) {
            const ObjectiveSpec spec = make_objective(kind, h);
            const ThresholdVector t = testutil::random_thresholds(rng, 3);
            ThresholdVector dup = t;
            dup.values.push_back(t.values[1]);
            std::sort(dup.values.begin(), dup.values.end());
            CHECK(fitness(spec, t) == fitness(spec, dup));
        }
    }
}
