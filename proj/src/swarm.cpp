#include "swarmthresh/swarm.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>

#include "swarmthresh/error.hpp"

namespace swarmthresh {

namespace {

// Shift added to the gamma weights so the "better subswarm pulls harder"
// ordering survives the sign flip of the minimization fitness.
constexpr double kGammaEps = 1e-9;

void validate(SwarmAlgorithm algo, int m, const SwarmParams &p) {
    if (m < 1 || m > kLevels - 1)
        throw InvalidParams("threshold count m must be in [1, 255]");
    if (p.n_particles < 1)
        throw InvalidParams("n_particles must be positive");
    if (algo == SwarmAlgorithm::chpso && p.n_particles % 4 != 0)
        throw InvalidParams("chpso needs n_particles divisible by 4");
    if (p.n_iterations < 1)
        throw InvalidParams("n_iterations must be positive");
    if (!(p.v_max > 0.0))
        throw InvalidParams("v_max must be positive");
    const auto &a = p.impact_factors;
    if (std::abs(a[0] + a[1] + a[2] - 1.0) > 1e-12)
        throw InvalidParams("impact factors must sum to 1");
}

double evaluate(const ObjectiveSpec &spec, const Particle &p) {
    return minimization_fitness(spec, decode_position(p.position));
}

// Refreshes per-subswarm bests and the swarm global best from the personal
// bests. Strictly-better wins, so on ties the first encountered (lower
// subswarm, lower particle index, earlier iteration) is kept.
void update_bests(SwarmState &st) {
    const int n_sub = static_cast<int>(st.subswarms.size());
    for (int s = 0; s < n_sub; ++s) {
        for (const Particle &p : st.subswarms[s]) {
            if (p.best_fitness < st.sub_best_fitness[s]) {
                st.sub_best_fitness[s] = p.best_fitness;
                st.sub_best_position[s] = p.best_position;
            }
        }
        if (st.sub_best_fitness[s] < st.gbest_fitness) {
            st.gbest_fitness = st.sub_best_fitness[s];
            st.gbest_position = st.sub_best_position[s];
        }
    }
}

} // namespace

double inertia_at(const SwarmParams &params, int iteration) {
    if (params.n_iterations <= 1) return params.inertia_start;
    return params.inertia_start +
           (params.inertia_end - params.inertia_start) *
               static_cast<double>(iteration) /
               static_cast<double>(params.n_iterations - 1);
}

SwarmState init_swarm(SwarmAlgorithm algo, int m, const SwarmParams &params,
                      const ObjectiveSpec &spec, Rng &rng) {
    validate(algo, m, params);
    const int n_sub = algo == SwarmAlgorithm::chpso ? 4 : 1;
    const int per = params.n_particles / n_sub;

    SwarmState st;
    st.subswarms.resize(n_sub);
    for (int s = 0; s < n_sub; ++s) {
        st.subswarms[s].reserve(per);
        for (int i = 0; i < per; ++i) {
            Particle p;
            p.position.resize(m);
            p.velocity.resize(m);
            for (int d = 0; d < m; ++d)
                p.position[d] = rng.uniform(0.0, double(kLevels - 1));
            for (int d = 0; d < m; ++d)
                p.velocity[d] = rng.uniform(-params.v_max, params.v_max);
            p.best_position = p.position;
            p.best_fitness = evaluate(spec, p);
            st.subswarms[s].push_back(std::move(p));
        }
    }
    st.sub_best_fitness.assign(n_sub, std::numeric_limits<double>::infinity());
    st.sub_best_position.assign(n_sub, std::vector<double>(m, 0.0));
    st.gbest_fitness = std::numeric_limits<double>::infinity();
    st.gbest_position.assign(m, 0.0);
    update_bests(st);
    st.iteration = 0;
    return st;
}

void pso_step(SwarmState &state, const ObjectiveSpec &spec,
              const SwarmParams &params, Rng &rng) {
    const double w = inertia_at(params, state.iteration);
    const std::vector<double> gbest = state.gbest_position; // frozen for the step
    const int m = static_cast<int>(gbest.size());
    std::vector<double> r1(m), r2(m);

    for (Particle &p : state.subswarms[0]) {
        for (int d = 0; d < m; ++d) r1[d] = rng.uniform01();
        for (int d = 0; d < m; ++d) r2[d] = rng.uniform01();
        for (int d = 0; d < m; ++d) {
            double v = w * p.velocity[d] +
                       params.c1 * r1[d] * (p.best_position[d] - p.position[d]) +
                       params.c2 * r2[d] * (gbest[d] - p.position[d]);
            v = std::clamp(v, -params.v_max, params.v_max);
            p.velocity[d] = v;
            p.position[d] = std::clamp(p.position[d] + v, 0.0, double(kLevels - 1));
        }
    }
    for (Particle &p : state.subswarms[0]) {
        const double f = evaluate(spec, p);
        if (f < p.best_fitness) {
            p.best_fitness = f;
            p.best_position = p.position;
        }
    }
    update_bests(state);
    ++state.iteration;
}

void chpso_step(SwarmState &state, const ObjectiveSpec &spec,
                const SwarmParams &params, Rng &rng) {
    assert(state.subswarms.size() == 4);
    const double w = inertia_at(params, state.iteration);
    const std::vector<double> gbest = state.gbest_position; // frozen for the step
    const int m = static_cast<int>(gbest.size());
    const int per = static_cast<int>(state.subswarms[0].size());
    const auto [a1, a2, a3] = params.impact_factors;

    auto &basic1 = state.subswarms[0];
    auto &basic2 = state.subswarms[1];
    auto &adaptive = state.subswarms[2];
    auto &exploration = state.subswarms[3];

    std::vector<double> f_basic1(per), f_basic2(per);
    std::vector<double> r1(m), r2(m);

    for (int i = 0; i < per; ++i) {
        // basic subswarms: plain velocity/position update against the
        // swarm-global best
        for (Particle *p : {&basic1[i], &basic2[i]}) {
            for (int d = 0; d < m; ++d) r1[d] = rng.uniform01();
            for (int d = 0; d < m; ++d) r2[d] = rng.uniform01();
            for (int d = 0; d < m; ++d) {
                double v = w * p->velocity[d] +
                           params.c1 * r1[d] * (p->best_position[d] - p->position[d]) +
                           params.c2 * r2[d] * (gbest[d] - p->position[d]);
                v = std::clamp(v, -params.v_max, params.v_max);
                p->velocity[d] = v;
                p->position[d] =
                    std::clamp(p->position[d] + v, 0.0, double(kLevels - 1));
            }
        }

        // gamma weights from the basic pair's fresh fitnesses; the shift
        // keeps both positive so the better one gets the larger factor
        f_basic1[i] = evaluate(spec, basic1[i]);
        f_basic2[i] = evaluate(spec, basic2[i]);
        const double mn = std::min(f_basic1[i], f_basic2[i]);
        const double g1 = f_basic1[i] - mn + kGammaEps;
        const double g2 = f_basic2[i] - mn + kGammaEps;
        const double gamma = g1 + g2;

        // adaptive subswarm: inertia-scaled blend of the basic velocities
        // plus the usual personal/global attraction
        Particle &p3 = adaptive[i];
        for (int d = 0; d < m; ++d) r1[d] = rng.uniform01();
        for (int d = 0; d < m; ++d) r2[d] = rng.uniform01();
        for (int d = 0; d < m; ++d) {
            const double blend = (gamma / g1) * basic1[i].velocity[d] +
                                 (gamma / g2) * basic2[i].velocity[d] +
                                 p3.velocity[d];
            double v = w * blend +
                       params.c1 * r1[d] * (p3.best_position[d] - p3.position[d]) +
                       params.c2 * r2[d] * (gbest[d] - p3.position[d]);
            v = std::clamp(v, -params.v_max, params.v_max);
            p3.velocity[d] = v;
            p3.position[d] = std::clamp(p3.position[d] + v, 0.0, double(kLevels - 1));
        }

        // exploration subswarm: velocity difference of the other three,
        // position from the impact-factor blend
        Particle &p4 = exploration[i];
        for (int d = 0; d < m; ++d) {
            double v = basic1[i].velocity[d] + basic2[i].velocity[d] -
                       p3.velocity[d];
            v = std::clamp(v, -params.v_max, params.v_max);
            p4.velocity[d] = v;
            const double x = a1 * p4.position[d] + a2 * p4.best_position[d] +
                             a3 * gbest[d] + v;
            p4.position[d] = std::clamp(x, 0.0, double(kLevels - 1));
        }
    }

    // evaluate everything, then roll bests up (particle -> subswarm -> swarm)
    for (int s = 0; s < 4; ++s) {
        for (int i = 0; i < per; ++i) {
            Particle &p = state.subswarms[s][i];
            const double f = s == 0   ? f_basic1[i]
                             : s == 1 ? f_basic2[i]
                                      : evaluate(spec, p);
            if (f < p.best_fitness) {
                p.best_fitness = f;
                p.best_position = p.position;
            }
        }
    }
    update_bests(state);
    ++state.iteration;
}

OptimizationResult run_swarm(SwarmAlgorithm algo, const ObjectiveSpec &spec,
                             int m, const SwarmParams &params) {
    validate(algo, m, params);
    const auto t0 = std::chrono::steady_clock::now();

    Rng rng(params.seed);
    SwarmState st = init_swarm(algo, m, params, spec, rng);

    OptimizationResult res;
    res.trace.reserve(params.n_iterations);
    for (int it = 0; it < params.n_iterations; ++it) {
        if (algo == SwarmAlgorithm::pso)
            pso_step(st, spec, params, rng);
        else
            chpso_step(st, spec, params, rng);
        res.trace.push_back(st.gbest_fitness);
    }

    res.thresholds = decode_position(st.gbest_position);
    res.maximization_fitness = -st.gbest_fitness;
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return res;
}

} // namespace swarmthresh
