#include "swarmthresh/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>

#include "swarmthresh/error.hpp"
#include "swarmthresh/histogram.hpp"
#include "swarmthresh/image.hpp"
#include "swarmthresh/oracle.hpp"
#include "swarmthresh/parallel.hpp"
#include "swarmthresh/rng.hpp"
#include "swarmthresh/segment.hpp"

namespace swarmthresh {

const char *to_string(Algorithm a) {
    switch (a) {
    case Algorithm::pso: return "pso";
    case Algorithm::chpso: return "chpso";
    case Algorithm::exhaustive: return "exhaustive";
    case Algorithm::dp: return "dp";
    }
    return "?";
}

bool is_oracle(Algorithm a) {
    return a == Algorithm::exhaustive || a == Algorithm::dp;
}

std::uint64_t derive_run_seed(std::uint64_t master, const std::string &image,
                              Objective objective, int m, Algorithm algorithm,
                              int run_index) {
    std::string key = image;
    key += '|';
    key += to_string(objective);
    key += '|';
    key += std::to_string(m);
    key += '|';
    key += to_string(algorithm);
    key += '|';
    key += std::to_string(run_index);
    return master ^ fnv1a64(key);
}

namespace {

struct LoadedImage {
    std::string path;
    GrayImage image;
    ObjectiveSpec spec_otsu;
    ObjectiveSpec spec_kapur;
};

const ObjectiveSpec &spec_for(const LoadedImage &li, Objective o) {
    return o == Objective::otsu ? li.spec_otsu : li.spec_kapur;
}

struct Task {
    int image_idx;
    Objective objective;
    int m;
    Algorithm algorithm;
    int run_index;
};

void validate_config(const ExperimentConfig &cfg) {
    if (cfg.images.empty()) throw InvalidParams("no input images");
    if (cfg.objectives.empty()) throw InvalidParams("no objectives selected");
    if (cfg.algorithms.empty()) throw InvalidParams("no algorithms selected");
    if (cfg.levels.empty()) throw InvalidParams("no threshold counts selected");
    if (cfg.runs < 1) throw InvalidParams("runs must be >= 1");
    for (int m : cfg.levels)
        if (m < 1 || m > kLevels - 1)
            throw InvalidParams("threshold counts must be in [1, 255]");
    const SwarmParams &p = cfg.swarm;
    if (p.n_particles < 1 || p.n_iterations < 1 || !(p.v_max > 0.0))
        throw InvalidParams("bad swarm parameters");
    if (std::abs(p.impact_factors[0] + p.impact_factors[1] +
                 p.impact_factors[2] - 1.0) > 1e-12)
        throw InvalidParams("impact factors must sum to 1");
    for (Algorithm a : cfg.algorithms) {
        if (a == Algorithm::chpso && p.n_particles % 4 != 0)
            throw InvalidParams("chpso needs n_particles divisible by 4");
        if (a == Algorithm::exhaustive)
            for (int m : cfg.levels)
                if (m > 3)
                    throw InvalidParams(
                        "exhaustive search is limited to m <= 3; use dp");
    }
}

RunReport execute(const LoadedImage &li, const Task &task,
                  const ExperimentConfig &cfg) {
    const ObjectiveSpec &spec = spec_for(li, task.objective);

    RunReport r;
    r.image = li.path;
    r.objective = task.objective;
    r.m = task.m;
    r.algorithm = task.algorithm;
    r.run_index = task.run_index;
    r.seed = derive_run_seed(cfg.swarm.seed, li.path, task.objective, task.m,
                             task.algorithm, task.run_index);

    if (is_oracle(task.algorithm)) {
        const auto t0 = std::chrono::steady_clock::now();
        const OracleResult o = task.algorithm == Algorithm::dp
                                   ? dp_search(spec, task.m)
                                   : exhaustive_search(spec, task.m);
        r.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        r.thresholds = o.thresholds;
        r.fitness = o.fitness;
    } else {
        SwarmParams params = cfg.swarm;
        params.seed = r.seed;
        const SwarmAlgorithm algo = task.algorithm == Algorithm::pso
                                        ? SwarmAlgorithm::pso
                                        : SwarmAlgorithm::chpso;
        const OptimizationResult res = run_swarm(algo, spec, task.m, params);
        r.thresholds = res.thresholds;
        r.fitness = res.maximization_fitness;
        r.wall_time_s = res.wall_time_s;
    }
    if (!cfg.measure_time) r.wall_time_s = 0.0;

    const SegmentedImage seg = segment(li.image, r.thresholds);
    const MetricReport mr = compute_metrics(li.image, seg, r.fitness);
    r.psnr_db = mr.psnr_db;
    r.uniformity = mr.uniformity;
    r.me_pct = mr.misclassification_pct;
    return r;
}

std::string segmented_name(const std::string &image_path, Objective o, int m,
                           Algorithm a) {
    const std::string stem = std::filesystem::path(image_path).stem().string();
    return stem + "_" + to_string(o) + "_m" + std::to_string(m) + "_" +
           to_string(a) + ".png";
}

} // namespace

ExperimentOutput run_experiment(const ExperimentConfig &cfg) {
    validate_config(cfg);

    ExperimentOutput out;

    std::vector<LoadedImage> loaded;
    for (const std::string &path : cfg.images) {
        try {
            LoadedImage li;
            li.path = path;
            li.image = load_image(path);
            const Histogram h = build_histogram(li.image);
            li.spec_otsu = make_objective(Objective::otsu, h);
            li.spec_kapur = make_objective(Objective::kapur, h);
            loaded.push_back(std::move(li));
        } catch (const Error &e) {
            out.failures.push_back({path, e.what()});
        }
    }

    std::vector<Task> tasks;
    for (int ii = 0; ii < static_cast<int>(loaded.size()); ++ii)
        for (Objective o : cfg.objectives)
            for (int m : cfg.levels)
                for (Algorithm a : cfg.algorithms) {
                    const int n_runs = is_oracle(a) ? 1 : cfg.runs;
                    for (int run = 0; run < n_runs; ++run)
                        tasks.push_back({ii, o, m, a, run});
                }

    out.runs.resize(tasks.size());
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(tasks.size()); ++i)
        out.runs[i] = execute(loaded[tasks[i].image_idx], tasks[i], cfg);

    // aggregate rows in task order; the runs of one cell are contiguous
    std::size_t pos = 0;
    for (int ii = 0; ii < static_cast<int>(loaded.size()); ++ii)
        for (Objective o : cfg.objectives)
            for (int m : cfg.levels)
                for (Algorithm a : cfg.algorithms) {
                    const int n_runs = is_oracle(a) ? 1 : cfg.runs;
                    AggregateRow row;
                    row.image = loaded[ii].path;
                    row.objective = o;
                    row.m = m;
                    row.algorithm = a;
                    row.runs = n_runs;

                    std::vector<double> fits;
                    fits.reserve(n_runs);
                    double sum_fit = 0, sum_psnr = 0, sum_me = 0, sum_wall = 0;
                    double best_psnr = -std::numeric_limits<double>::infinity();
                    int best_idx = 0;
                    for (int k = 0; k < n_runs; ++k) {
                        const RunReport &r = out.runs[pos + k];
                        fits.push_back(r.fitness);
                        sum_fit += r.fitness;
                        sum_psnr += r.psnr_db;
                        sum_me += r.me_pct;
                        sum_wall += r.wall_time_s;
                        if (r.fitness > fits[best_idx]) best_idx = k;
                        if (r.psnr_db > best_psnr) best_psnr = r.psnr_db;
                    }
                    row.best_thresholds = out.runs[pos + best_idx].thresholds;
                    row.best_fitness = fits[best_idx];
                    row.mean_fitness = sum_fit / n_runs;
                    row.std_fitness = run_std(fits);
                    row.mean_psnr = sum_psnr / n_runs;
                    row.best_psnr = best_psnr;
                    row.mean_me_pct = sum_me / n_runs;
                    row.mean_wall_time_s = sum_wall / n_runs;
                    out.aggregates.push_back(std::move(row));
                    pos += n_runs;
                }

    if (cfg.write_segmented) {
        std::filesystem::create_directories(cfg.output_dir);
        for (int ii = 0; ii < static_cast<int>(loaded.size()); ++ii) {
            for (const AggregateRow &row : out.aggregates) {
                if (row.image != loaded[ii].path) continue;
                const auto path =
                    std::filesystem::path(cfg.output_dir) /
                    segmented_name(row.image, row.objective, row.m, row.algorithm);
                try {
                    const SegmentedImage seg =
                        segment(loaded[ii].image, row.best_thresholds);
                    write_image(seg.reconstructed, path.string());
                } catch (const Error &e) {
                    out.failures.push_back({path.string(), e.what()});
                }
            }
        }
    }
    return out;
}

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string &s) {
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

std::string thresholds_field(const ThresholdVector &t) {
    std::string s;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(t.values[i]);
    }
    return csv_quote(s);
}

} // namespace

void emit_csv(const ExperimentOutput &out, const std::string &output_dir) {
    std::filesystem::create_directories(output_dir);
    const auto dir = std::filesystem::path(output_dir);

    {
        std::ofstream f(dir / "runs.csv", std::ios::binary);
        if (!f) throw IoError((dir / "runs.csv").string(), "cannot open for writing");
        f << "image,objective,m,algorithm,run_index,seed,thresholds,fitness,"
             "psnr_db,uniformity,me_pct,wall_time_s\n";
        for (const RunReport &r : out.runs) {
            f << csv_quote(r.image) << ',' << to_string(r.objective) << ','
              << r.m << ',' << to_string(r.algorithm) << ',' << r.run_index
              << ',' << r.seed << ',' << thresholds_field(r.thresholds) << ','
              << format_double(r.fitness) << ',' << format_double(r.psnr_db)
              << ',' << format_double(r.uniformity) << ','
              << format_double(r.me_pct) << ','
              << format_double(r.wall_time_s) << '\n';
        }
    }
    {
        std::ofstream f(dir / "summary.csv", std::ios::binary);
        if (!f)
            throw IoError((dir / "summary.csv").string(), "cannot open for writing");
        f << "image,objective,m,algorithm,runs,best_thresholds,best_fitness,"
             "mean_fitness,std_fitness,mean_psnr,best_psnr,mean_me_pct,"
             "mean_wall_time_s\n";
        for (const AggregateRow &r : out.aggregates) {
            f << csv_quote(r.image) << ',' << to_string(r.objective) << ','
              << r.m << ',' << to_string(r.algorithm) << ',' << r.runs << ','
              << thresholds_field(r.best_thresholds) << ','
              << format_double(r.best_fitness) << ','
              << format_double(r.mean_fitness) << ','
              << format_double(r.std_fitness) << ','
              << format_double(r.mean_psnr) << ','
              << format_double(r.best_psnr) << ','
              << format_double(r.mean_me_pct) << ','
              << format_double(r.mean_wall_time_s) << '\n';
        }
    }
}

} // namespace swarmthresh
