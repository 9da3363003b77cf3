#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarmthresh/metrics.hpp"
#include "swarmthresh/objectives.hpp"
#include "swarmthresh/swarm.hpp"

namespace swarmthresh {

enum class Algorithm { pso, chpso, exhaustive, dp };

const char *to_string(Algorithm a);
bool is_oracle(Algorithm a);

struct ExperimentConfig {
    std::vector<std::string> images;
    std::vector<Objective> objectives{Objective::otsu, Objective::kapur};
    std::vector<int> levels{2, 3, 4, 5};
    std::vector<Algorithm> algorithms{Algorithm::chpso};
    int runs = 50;
    SwarmParams swarm;
    std::string output_dir = ".";
    bool write_segmented = false;
    bool measure_time = true; // false zeroes the wall-time columns
};

struct RunReport {
    std::string image;
    Objective objective = Objective::otsu;
    int m = 0;
    Algorithm algorithm = Algorithm::chpso;
    int run_index = 0;
    std::uint64_t seed = 0;
    ThresholdVector thresholds;
    double fitness = 0.0; // maximization value, recomputable from the inputs
    double psnr_db = 0.0;
    double uniformity = 0.0;
    double me_pct = 0.0;
    double wall_time_s = 0.0;
};

/// One row per image x objective x m x algorithm.
struct AggregateRow {
    std::string image;
    Objective objective = Objective::otsu;
    int m = 0;
    Algorithm algorithm = Algorithm::chpso;
    int runs = 0;
    ThresholdVector best_thresholds;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double std_fitness = 0.0;
    double mean_psnr = 0.0;
    double best_psnr = 0.0;
    double mean_me_pct = 0.0;
    double mean_wall_time_s = 0.0;
};

struct ExperimentFailure {
    std::string image;
    std::string message;
};

struct ExperimentOutput {
    std::vector<RunReport> runs;
    std::vector<AggregateRow> aggregates;
    std::vector<ExperimentFailure> failures;
};

/// Stable per-run seed: master ^ FNV-1a("image|objective|m|algorithm|run").
/// Adding or removing images never perturbs the other runs' seeds.
std::uint64_t derive_run_seed(std::uint64_t master, const std::string &image,
                              Objective objective, int m, Algorithm algorithm,
                              int run_index);

/// Runs the full cartesian product of the config. Each image loads once;
/// stochastic algorithms run cfg.runs times with derived seeds, oracles
/// once. Independent runs execute in parallel; reports come back sorted by
/// coordinates, so the output does not depend on the worker count. Images
/// that fail to load are recorded in .failures and skipped.
ExperimentOutput run_experiment(const ExperimentConfig &cfg);

/// Writes runs.csv and summary.csv into output_dir (UTF-8, comma-separated,
/// header row, '.' decimal separator, thresholds as one quoted
/// space-separated field, infinity as "inf").
void emit_csv(const ExperimentOutput &out, const std::string &output_dir);

/// CLI entry point (subcommands: segment, experiment, oracle).
/// Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int cli_main(int argc, const char *const *argv);

} // namespace swarmthresh
