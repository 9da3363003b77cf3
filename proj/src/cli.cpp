#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "swarmthresh/error.hpp"
#include "swarmthresh/experiment.hpp"
#include "swarmthresh/histogram.hpp"
#include "swarmthresh/image.hpp"
#include "swarmthresh/oracle.hpp"
#include "swarmthresh/segment.hpp"

namespace swarmthresh {

namespace {

Objective parse_objective(const std::string &s) {
    return s == "kapur" ? Objective::kapur : Objective::otsu;
}

Algorithm parse_algorithm(const std::string &s) {
    if (s == "pso") return Algorithm::pso;
    if (s == "dp") return Algorithm::dp;
    if (s == "exhaustive") return Algorithm::exhaustive;
    return Algorithm::chpso;
}

struct SwarmCliOpts {
    int iters = 100;
    int particles = 20;
    std::uint64_t seed = 1;
    std::string inertia = "0.4:0.9";
};

bool parse_inertia(const std::string &s, double &start, double &end) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) return false;
    try {
        std::size_t used = 0;
        start = std::stod(s.substr(0, colon), &used);
        if (used != colon) return false;
        end = std::stod(s.substr(colon + 1), &used);
        if (used != s.size() - colon - 1) return false;
    } catch (...) {
        return false;
    }
    return true;
}

void add_swarm_options(CLI::App *cmd, SwarmCliOpts &o) {
    cmd->add_option("--iters", o.iters, "iterations per optimization run")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--particles", o.particles,
                    "total particle count (chpso splits it into 4 subswarms)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--inertia", o.inertia,
                    "inertia schedule start:end (linear over the iterations)")
        ->check(CLI::Validator(
            [](std::string &s) -> std::string {
                double a, b;
                return parse_inertia(s, a, b) ? "" : "expected start:end";
            },
            "START:END"))
        ->capture_default_str();
}

SwarmParams to_swarm_params(const SwarmCliOpts &o) {
    SwarmParams p;
    p.n_iterations = o.iters;
    p.n_particles = o.particles;
    p.seed = o.seed;
    parse_inertia(o.inertia, p.inertia_start, p.inertia_end);
    return p;
}

// flat key=value config file: '#' comments, blank lines, repeated keys and
// comma-separated values both accumulate for the list-valued options
std::map<std::string, std::vector<std::string>> parse_config_file(
    const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidParams("cannot read config file: " + path);
    std::map<std::string, std::vector<std::string>> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw InvalidParams("config line " + std::to_string(lineno) +
                                " is not key=value: " + path);
        const std::string key = trim(stripped.substr(0, eq));
        std::string rest = stripped.substr(eq + 1);
        std::size_t start = 0;
        while (true) {
            const auto comma = rest.find(',', start);
            const std::string item = trim(rest.substr(start, comma - start));
            if (!item.empty()) out[key].push_back(item);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        out[key]; // a bare "key=" still registers the key for validation
    }
    return out;
}

long parse_long(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used == value.size()) return v;
    } catch (...) {
    }
    throw InvalidParams("config value for '" + key + "' is not a number: " + value);
}

std::vector<std::string> collect_images(const std::vector<std::string> &images,
                                        const std::string &images_dir) {
    std::vector<std::string> all = images;
    if (!images_dir.empty()) {
        if (!std::filesystem::is_directory(images_dir))
            throw FileNotFound(images_dir);
        std::vector<std::string> found;
        for (const auto &entry : std::filesystem::directory_iterator(images_dir)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (ext == ".png" || ext == ".pgm")
                found.push_back(entry.path().string());
        }
        std::sort(found.begin(), found.end());
        all.insert(all.end(), found.begin(), found.end());
    }
    return all;
}

void print_report(const RunReport &r, double mse_value) {
    std::cout << "image: " << r.image << '\n'
              << "objective: " << to_string(r.objective) << '\n'
              << "m: " << r.m << '\n'
              << "algorithm: " << to_string(r.algorithm) << '\n'
              << "thresholds:";
    for (int t : r.thresholds.values) std::cout << ' ' << t;
    std::cout << '\n'
              << "fitness: " << r.fitness << '\n'
              << "mse: " << mse_value << '\n'
              << "psnr_db: " << r.psnr_db << '\n'
              << "uniformity: " << r.uniformity << '\n'
              << "me_pct: " << r.me_pct << '\n'
              << "wall_time_s: " << r.wall_time_s << '\n';
}

int do_segment(const std::string &image_path, Objective objective, int m,
               Algorithm algorithm, const SwarmParams &params,
               const std::string &out_dir, bool write_segmented) {
    const GrayImage img = load_image(image_path);
    const Histogram hist = build_histogram(img);
    const ObjectiveSpec spec = make_objective(objective, hist);

    RunReport r;
    r.image = image_path;
    r.objective = objective;
    r.m = m;
    r.algorithm = algorithm;
    if (is_oracle(algorithm)) {
        const auto t0 = std::chrono::steady_clock::now();
        const OracleResult o = algorithm == Algorithm::dp
                                   ? dp_search(spec, m)
                                   : exhaustive_search(spec, m);
        r.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        r.thresholds = o.thresholds;
        r.fitness = o.fitness;
    } else {
        const SwarmAlgorithm algo = algorithm == Algorithm::pso
                                        ? SwarmAlgorithm::pso
                                        : SwarmAlgorithm::chpso;
        const OptimizationResult res = run_swarm(algo, spec, m, params);
        r.thresholds = res.thresholds;
        r.fitness = res.maximization_fitness;
        r.wall_time_s = res.wall_time_s;
    }

    const SegmentedImage seg = segment(img, r.thresholds);
    const MetricReport mr = compute_metrics(img, seg, r.fitness);
    r.psnr_db = mr.psnr_db;
    r.uniformity = mr.uniformity;
    r.me_pct = mr.misclassification_pct;
    std::cout.precision(10);
    print_report(r, mr.mse);

    if (write_segmented) {
        std::filesystem::create_directories(out_dir);
        const std::string stem = std::filesystem::path(image_path).stem().string();
        const auto out =
            std::filesystem::path(out_dir) /
            (stem + "_" + to_string(objective) + "_m" + std::to_string(m) + "_" +
             to_string(algorithm) + ".png");
        write_image(seg.reconstructed, out.string());
        std::cout << "segmented: " << out.string() << '\n';
    }
    return 0;
}

int do_oracle(const std::string &image_path, Objective objective, int m,
              Algorithm algorithm) {
    const GrayImage img = load_image(image_path);
    const ObjectiveSpec spec = make_objective(objective, build_histogram(img));
    const auto t0 = std::chrono::steady_clock::now();
    const OracleResult o = algorithm == Algorithm::exhaustive
                               ? exhaustive_search(spec, m)
                               : dp_search(spec, m);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cout.precision(17);
    std::cout << "image: " << image_path << '\n'
              << "objective: " << to_string(objective) << '\n'
              << "m: " << m << '\n'
              << "algorithm: " << to_string(algorithm) << '\n'
              << "thresholds:";
    for (int t : o.thresholds.values) std::cout << ' ' << t;
    std::cout << '\n'
              << "fitness: " << o.fitness << '\n'
              << "evaluations: " << o.evaluations << '\n'
              << "wall_time_s: " << dt << '\n';
    return 0;
}

int do_experiment(const ExperimentConfig &cfg) {
    const ExperimentOutput out = run_experiment(cfg);
    emit_csv(out, cfg.output_dir);
    for (const ExperimentFailure &f : out.failures)
        std::cerr << "warning: " << f.image << ": " << f.message << '\n';
    std::cout << "wrote "
              << (std::filesystem::path(cfg.output_dir) / "runs.csv").string()
              << " (" << out.runs.size() << " rows) and "
              << (std::filesystem::path(cfg.output_dir) / "summary.csv").string()
              << " (" << out.aggregates.size() << " rows)\n";
    if (out.runs.empty() && !out.failures.empty()) {
        std::cerr << "error: no image could be processed\n";
        return 2;
    }
    return 0;
}

} // namespace

int cli_main(int argc, const char *const *argv) {
    CLI::App app{"multilevel grayscale image thresholding: multiswarm PSO "
                 "optimizers, exact oracles, segmentation quality metrics"};
    app.require_subcommand(1);

    const std::vector<std::string> objective_names{"otsu", "kapur"};
    const std::vector<std::string> algorithm_names{"pso", "chpso", "dp",
                                                   "exhaustive"};

    // segment: one image, one m, print thresholds and metrics
    CLI::App *seg = app.add_subcommand(
        "segment", "threshold one image and report the quality metrics");
    std::string seg_image;
    std::string seg_objective = "otsu";
    int seg_m = 2;
    std::string seg_algo = "chpso";
    std::string seg_out = ".";
    bool seg_write = false;
    SwarmCliOpts seg_swarm;
    seg->add_option("--image", seg_image, "input image (png or binary pgm)")
        ->required();
    seg->add_option("--objective", seg_objective, "fitness criterion")
        ->check(CLI::IsMember(objective_names))
        ->capture_default_str();
    seg->add_option("--levels", seg_m, "number of thresholds m")
        ->check(CLI::Range(1, 255))
        ->capture_default_str();
    seg->add_option("--algo", seg_algo, "search algorithm")
        ->check(CLI::IsMember(algorithm_names))
        ->capture_default_str();
    seg->add_option("--out", seg_out, "output directory for --write-segmented")
        ->capture_default_str();
    seg->add_flag("--write-segmented", seg_write,
                  "write the class-mean reconstruction as png");
    add_swarm_options(seg, seg_swarm);

    // experiment: the full cartesian product with CSV reports
    CLI::App *exp = app.add_subcommand(
        "experiment", "repeated seeded runs over images; writes runs.csv and "
                      "summary.csv");
    std::vector<std::string> exp_images;
    std::string exp_images_dir;
    std::vector<std::string> exp_objectives;
    std::vector<int> exp_levels;
    std::vector<std::string> exp_algos;
    int exp_runs = 50;
    std::string exp_out = ".";
    bool exp_write = false;
    std::string exp_timer = "real";
    SwarmCliOpts exp_swarm;
    exp->add_option("--image", exp_images, "input image; repeatable");
    exp->add_option("--images-dir", exp_images_dir,
                    "directory scanned for *.png and *.pgm (sorted)");
    exp->add_option("--objective", exp_objectives,
                    "fitness criteria (default: both)")
        ->check(CLI::IsMember(objective_names));
    exp->add_option("--levels", exp_levels,
                    "threshold counts (default: 2 3 4 5)")
        ->check(CLI::Range(1, 255));
    exp->add_option("--algo", exp_algos, "algorithms (default: chpso)")
        ->check(CLI::IsMember(algorithm_names));
    exp->add_option("--runs", exp_runs, "repetitions per stochastic algorithm")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exp->add_option("--out", exp_out, "output directory")->capture_default_str();
    exp->add_flag("--write-segmented", exp_write,
                  "write the best segmentation per row as png");
    exp->add_option("--timer", exp_timer,
                    "wall-time columns: real measurements, or off for "
                    "byte-reproducible output")
        ->check(CLI::IsMember({"real", "off"}))
        ->capture_default_str();
    add_swarm_options(exp, exp_swarm);
    std::string exp_config;
    exp->add_option("--config", exp_config,
                    "flat key=value file mirroring these flags; command-line "
                    "flags win");

    // oracle: exact optimum for one image
    CLI::App *orc = app.add_subcommand(
        "oracle", "exact optimal thresholds by dynamic programming or "
                  "exhaustive scan");
    std::string orc_image;
    std::string orc_objective = "otsu";
    int orc_m = 2;
    std::string orc_algo = "dp";
    orc->add_option("--image", orc_image, "input image (png or binary pgm)")
        ->required();
    orc->add_option("--objective", orc_objective, "fitness criterion")
        ->check(CLI::IsMember(objective_names))
        ->capture_default_str();
    orc->add_option("--levels", orc_m, "number of thresholds m")
        ->check(CLI::Range(1, 255))
        ->capture_default_str();
    orc->add_option("--algo", orc_algo, "dp or exhaustive")
        ->check(CLI::IsMember({"dp", "exhaustive"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*seg)
            return do_segment(seg_image, parse_objective(seg_objective), seg_m,
                              parse_algorithm(seg_algo),
                              to_swarm_params(seg_swarm), seg_out, seg_write);
        if (*orc)
            return do_oracle(orc_image, parse_objective(orc_objective), orc_m,
                             parse_algorithm(orc_algo));

        auto dedup = [](auto &v) {
            auto seen = v;
            seen.clear();
            for (const auto &x : v)
                if (std::find(seen.begin(), seen.end(), x) == seen.end())
                    seen.push_back(x);
            v = seen;
        };

        if (!exp_config.empty()) {
            const auto file = parse_config_file(exp_config);
            auto want = [&](const char *key, const char *flag) {
                const auto it = file.find(key);
                if (it == file.end() || exp->count(flag) > 0) return false;
                return !it->second.empty();
            };
            auto one = [&](const char *key) { return file.at(key).back(); };
            auto member = [&](const char *key, const std::string &v,
                              const std::vector<std::string> &allowed) {
                if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
                    throw InvalidParams("config value for '" + std::string(key) +
                                        "' must be one of the documented names");
                return v;
            };

            for (const auto &[key, values] : file) {
                static const std::vector<std::string> known{
                    "image",     "images-dir", "objective", "levels",
                    "algo",      "runs",       "out",       "write-segmented",
                    "timer",     "iters",      "particles", "seed",
                    "inertia"};
                if (std::find(known.begin(), known.end(), key) == known.end())
                    throw InvalidParams("unknown config key: " + key);
                (void)values;
            }

            if (want("image", "--image")) exp_images = file.at("image");
            if (want("images-dir", "--images-dir")) exp_images_dir = one("images-dir");
            if (want("objective", "--objective"))
                for (const auto &v : file.at("objective"))
                    exp_objectives.push_back(member("objective", v, objective_names));
            if (want("levels", "--levels"))
                for (const auto &v : file.at("levels"))
                    exp_levels.push_back(static_cast<int>(parse_long("levels", v)));
            if (want("algo", "--algo"))
                for (const auto &v : file.at("algo"))
                    exp_algos.push_back(member("algo", v, algorithm_names));
            if (want("runs", "--runs"))
                exp_runs = static_cast<int>(parse_long("runs", one("runs")));
            if (want("out", "--out")) exp_out = one("out");
            if (want("write-segmented", "--write-segmented"))
                exp_write = one("write-segmented") == "true" ||
                            one("write-segmented") == "1";
            if (want("timer", "--timer"))
                exp_timer = member("timer", one("timer"), {"real", "off"});
            if (want("iters", "--iters"))
                exp_swarm.iters = static_cast<int>(parse_long("iters", one("iters")));
            if (want("particles", "--particles"))
                exp_swarm.particles =
                    static_cast<int>(parse_long("particles", one("particles")));
            if (want("seed", "--seed"))
                exp_swarm.seed =
                    static_cast<std::uint64_t>(parse_long("seed", one("seed")));
            if (want("inertia", "--inertia")) {
                double a = 0, b = 0;
                if (!parse_inertia(one("inertia"), a, b))
                    throw InvalidParams("config value for 'inertia' must be start:end");
                exp_swarm.inertia = one("inertia");
            }
        }

        ExperimentConfig cfg;
        cfg.images = collect_images(exp_images, exp_images_dir);
        if (!exp_objectives.empty()) {
            cfg.objectives.clear();
            for (const auto &s : exp_objectives)
                cfg.objectives.push_back(parse_objective(s));
            dedup(cfg.objectives);
        }
        if (!exp_levels.empty()) {
            cfg.levels = exp_levels;
            dedup(cfg.levels);
        }
        if (!exp_algos.empty()) {
            cfg.algorithms.clear();
            for (const auto &s : exp_algos)
                cfg.algorithms.push_back(parse_algorithm(s));
            dedup(cfg.algorithms);
        }
        cfg.runs = exp_runs;
        cfg.swarm = to_swarm_params(exp_swarm);
        cfg.output_dir = exp_out;
        cfg.write_segmented = exp_write;
        cfg.measure_time = exp_timer != "off";
        return do_experiment(cfg);
    } catch (const InvalidParams &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const TooExpensive &e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace swarmthresh
