#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "swarmthresh/objectives.hpp"
#include "swarmthresh/rng.hpp"

namespace swarmthresh {

enum class SwarmAlgorithm { pso, chpso };

struct SwarmParams {
    int n_particles = 20;  // total across all subswarms
    int n_iterations = 100;
    double c1 = 1.49;
    double c2 = 1.49;
    double inertia_start = 0.4; // swap start/end to get the decreasing schedule
    double inertia_end = 0.9;
    std::array<double, 3> impact_factors{1.0 / 6.0, 1.0 / 3.0, 1.0 / 2.0};
    double v_max = (kLevels - 1) / 2.0;
    std::uint64_t seed = 1;
};

struct Particle {
    std::vector<double> position;      // in [0, 255] per coordinate
    std::vector<double> velocity;      // in [-v_max, v_max] per coordinate
    std::vector<double> best_position;
    double best_fitness = 0.0;         // minimization value at best_position
};

/// One subswarm for plain PSO, four equal subswarms for CHPSO. The swarm
/// global best is the minimum over the per-subswarm bests; ties go to the
/// first encountered (lower subswarm, lower particle index, earlier
/// iteration).
struct SwarmState {
    std::vector<std::vector<Particle>> subswarms;
    std::vector<std::vector<double>> sub_best_position;
    std::vector<double> sub_best_fitness;
    std::vector<double> gbest_position;
    double gbest_fitness = 0.0;
    int iteration = 0;
};

struct OptimizationResult {
    ThresholdVector thresholds;        // decoded global best
    double maximization_fitness = 0.0; // -gbest (the Otsu/Kapur value)
    std::vector<double> trace;         // gbest (minimization) after each iteration
    double wall_time_s = 0.0;
};

/// Inertia for a 0-based iteration index: linear from inertia_start at
/// iteration 0 to inertia_end at the last iteration.
double inertia_at(const SwarmParams &params, int iteration);

/// Random draws are consumed in a fixed order so runs are reproducible:
/// per subswarm, per particle, position coordinates then velocity
/// coordinates at init; within a step, per particle the c1 vector then the
/// c2 vector, coordinates in dimension order.
SwarmState init_swarm(SwarmAlgorithm algo, int m, const SwarmParams &params,
                      const ObjectiveSpec &spec, Rng &rng);

/// One synchronous PSO iteration: all particles move against the frozen
/// global best, then get evaluated, then bests update (strictly-better
/// wins). Velocities clamp to +-v_max, positions to [0, 255].
void pso_step(SwarmState &state, const ObjectiveSpec &spec,
              const SwarmParams &params, Rng &rng);

/// One CHPSO iteration. Per particle index i: the two basic subswarms move
/// first; their fresh fitnesses weight the adaptive subswarm's velocity
/// blend (better basic subswarm pulls harder); the exploration subswarm
/// takes the velocity difference and the impact-factor position blend.
/// Evaluation and best updates happen after all moves, as in pso_step.
void chpso_step(SwarmState &state, const ObjectiveSpec &spec,
                const SwarmParams &params, Rng &rng);

/// Full optimization: seeds the stream from params.seed, initializes, runs
/// exactly n_iterations steps (no early stopping). Throws InvalidParams on
/// bad settings (e.g. CHPSO particle count not divisible by 4).
OptimizationResult run_swarm(SwarmAlgorithm algo, const ObjectiveSpec &spec,
                             int m, const SwarmParams &params);

} // namespace swarmthresh
