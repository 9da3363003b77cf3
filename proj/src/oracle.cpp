#include "swarmthresh/oracle.hpp"

#include <limits>
#include <vector>

#include "swarmthresh/error.hpp"
#include "swarmthresh/parallel.hpp"

namespace swarmthresh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Memoized class scores for every interval [a, b), 0 <= a <= b <= 256.
// 257*257 doubles (~0.5 MB); entries are exactly what class_score returns.
class ScoreTable {
public:
    explicit ScoreTable(const ObjectiveSpec &spec)
        : scores_(static_cast<std::size_t>(kLevels + 1) * (kLevels + 1), 0.0) {
#pragma omp parallel for num_threads(worker_count()) schedule(static)
        for (int a = 0; a <= kLevels; ++a)
            for (int b = a; b <= kLevels; ++b)
                scores_[index(a, b)] = class_score(spec, a, b);
    }

    double operator()(int a, int b) const { return scores_[index(a, b)]; }

private:
    static std::size_t index(int a, int b) {
        return static_cast<std::size_t>(a) * (kLevels + 1) + b;
    }
    std::vector<double> scores_;
};

struct Candidate {
    double value = kNegInf;
    ThresholdVector thresholds;

    // Total order: larger value wins, ties go to the lexicographically
    // smaller vector. Merging per-thread candidates with this rule gives
    // the same winner for any partition of the search space.
    bool beats(const Candidate &other) const {
        if (value != other.value) return value > other.value;
        return thresholds.values < other.thresholds.values;
    }
};

void consider(Candidate &best, double value, std::initializer_list<int> t) {
    if (value > best.value) {
        best.value = value;
        best.thresholds.values.assign(t);
    }
}

} // namespace

OracleResult exhaustive_search(const ObjectiveSpec &spec, int m) {
    if (m < 1) throw InvalidParams("m must be >= 1");
    if (m > 3)
        throw TooExpensive("exhaustive search is limited to m <= 3; use dp");

    const ScoreTable score(spec);
    Candidate best;
    std::uint64_t evals = 0;

    if (m == 1) {
        for (int t1 = 0; t1 < kLevels; ++t1)
            consider(best, score(0, t1) + score(t1, kLevels), {t1});
        evals = kLevels;
    } else {
#pragma omp parallel num_threads(worker_count())
        {
            Candidate local;
            std::uint64_t local_evals = 0;
#pragma omp for schedule(dynamic, 8) nowait
            for (int t1 = 0; t1 < kLevels - (m - 1); ++t1) {
                const double s1 = score(0, t1);
                for (int t2 = t1 + 1; t2 < kLevels - (m - 2); ++t2) {
                    const double s2 = s1 + score(t1, t2);
                    if (m == 2) {
                        consider(local, s2 + score(t2, kLevels), {t1, t2});
                        ++local_evals;
                    } else {
                        for (int t3 = t2 + 1; t3 < kLevels; ++t3) {
                            consider(local,
                                     s2 + score(t2, t3) + score(t3, kLevels),
                                     {t1, t2, t3});
                            ++local_evals;
                        }
                    }
                }
            }
#pragma omp critical(swarmthresh_exhaustive_merge)
            {
                if (local.beats(best)) best = local;
                evals += local_evals;
            }
        }
    }

    OracleResult res;
    res.thresholds = best.thresholds;
    res.fitness = fitness(spec, best.thresholds);
    res.evaluations = evals;
    return res;
}

namespace {

// Suffix-value dynamic program shared by the parallel and serial variants.
// layer[j - 2][s] is the best score of classes j-1..m when t_{j-1} = s,
// for j = 2..m+1; the first threshold may equal 0 (empty first class),
// later ones increase strictly.
template <typename Score>
OracleResult dp_impl(const ObjectiveSpec &spec, int m, Score &&score,
                     bool parallel) {
    if (m < 1 || m > kLevels - 1)
        throw InvalidParams("dp search needs 1 <= m <= 255");

    std::vector<std::vector<double>> layer(m, std::vector<double>(kLevels, kNegInf));
    std::uint64_t evals = 0;

    // base layer j = m+1: single final class [s, 256)
    for (int s = 0; s < kLevels; ++s)
        layer[m - 1][s] = score(s, kLevels);
    evals += kLevels;

    for (int j = m; j >= 2; --j) {
        std::vector<double> &cur = layer[j - 2];
        const std::vector<double> &next = layer[j - 1];
#pragma omp parallel for num_threads(worker_count()) schedule(static) if (parallel)
        for (int s = 0; s < kLevels; ++s) {
            double best = kNegInf;
            for (int t = s + 1; t < kLevels; ++t) {
                const double v = score(s, t) + next[t];
                if (v > best) best = v;
            }
            cur[s] = best;
        }
        evals += static_cast<std::uint64_t>(kLevels) * (kLevels - 1) / 2;
    }

    // first threshold: may coincide with the lower bound 0
    double opt = kNegInf;
    int first = 0;
    for (int t = 0; t < kLevels; ++t) {
        const double v = score(0, t) + layer[0][t];
        if (v > opt) {
            opt = v;
            first = t;
        }
    }
    evals += kLevels;

    // forward reconstruction; picking the smallest matching split at every
    // layer yields the lexicographically smallest optimum
    ThresholdVector thresholds;
    thresholds.values.reserve(m);
    thresholds.values.push_back(first);
    int prev = first;
    for (int j = 2; j <= m; ++j) {
        const std::vector<double> &next = layer[j - 1];
        const double target = layer[j - 2][prev];
        for (int t = prev + 1; t < kLevels; ++t) {
            if (score(prev, t) + next[t] == target) {
                thresholds.values.push_back(t);
                prev = t;
                break;
            }
        }
    }

    OracleResult res;
    res.thresholds = thresholds;
    res.fitness = fitness(spec, thresholds);
    res.evaluations = evals;
    return res;
}

} // namespace

OracleResult dp_search(const ObjectiveSpec &spec, int m) {
    const ScoreTable score(spec);
    return dp_impl(
        spec, m, [&](int a, int b) { return score(a, b); }, true);
}

OracleResult serial::exhaustive_search(const ObjectiveSpec &spec, int m) {
    if (m < 1) throw InvalidParams("m must be >= 1");
    if (m > 3)
        throw TooExpensive("exhaustive search is limited to m <= 3; use dp");

    Candidate best;
    std::uint64_t evals = 0;
    ThresholdVector t;
    t.values.resize(m);

    // odometer over strictly increasing vectors, visited in lexicographic
    // order; strict improvement keeps the lexicographically smallest max
    for (int d = 0; d < m; ++d) t.values[d] = d;
    while (true) {
        const double v = fitness(spec, t);
        ++evals;
        if (v > best.value) {
            best.value = v;
            best.thresholds = t;
        }
        int d = m - 1;
        while (d >= 0 && t.values[d] == kLevels - (m - d)) --d;
        if (d < 0) break;
        ++t.values[d];
        for (int k = d + 1; k < m; ++k) t.values[k] = t.values[k - 1] + 1;
    }

    OracleResult res;
    res.thresholds = best.thresholds;
    res.fitness = fitness(spec, best.thresholds);
    res.evaluations = evals;
    return res;
}

OracleResult serial::dp_search(const ObjectiveSpec &spec, int m) {
    return dp_impl(
        spec, m, [&](int a, int b) { return class_score(spec, a, b); }, false);
}

} // namespace swarmthresh
