#pragma once

#include <cstdint>

#include "swarmthresh/objectives.hpp"

namespace swarmthresh {

struct OracleResult {
    ThresholdVector thresholds;
    double fitness = 0.0;          // maximization value, recomputable
    std::uint64_t evaluations = 0; // work counter
};

/// Scans every strictly increasing integer vector in [0, 255]^m and returns
/// the lexicographically smallest maximizer. Throws TooExpensive for m > 3.
OracleResult exhaustive_search(const ObjectiveSpec &spec, int m);

/// Exact optimum over the same candidate space by dynamic programming over
/// split points, O(m * 256^2) with O(1) interval scores. Same tie-breaking
/// as exhaustive_search. Valid for 1 <= m <= 255.
OracleResult dp_search(const ObjectiveSpec &spec, int m);

namespace serial {
/// Reference implementations without the shared score table or OpenMP:
/// plain nested loops over full candidate vectors (exhaustive) and the
/// textbook single-threaded recurrence (dp). Used by tests and the
/// benchmark; results match the parallel versions bit for bit.
OracleResult exhaustive_search(const ObjectiveSpec &spec, int m);
OracleResult dp_search(const ObjectiveSpec &spec, int m);
} // namespace serial

} // namespace swarmthresh
