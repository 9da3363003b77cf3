#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "swarmthresh/error.hpp"
#include "swarmthresh/experiment.hpp"
#include "swarmthresh/histogram.hpp"
#include "swarmthresh/image.hpp"
#include "swarmthresh/oracle.hpp"
#include "test_util.hpp"

using namespace swarmthresh;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// split one CSV line; quoted fields may contain commas/doubled quotes
std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(split_csv(line));
    return rows;
}

ExperimentConfig small_config(const std::string &dir) {
    ExperimentConfig cfg;
    cfg.images = {dir + "/img_a.png", dir + "/img_b.png"};
    cfg.objectives = {Objective::otsu, Objective::kapur};
    cfg.levels = {2};
    cfg.algorithms = {Algorithm::chpso, Algorithm::dp};
    cfg.runs = 3;
    cfg.swarm.n_iterations = 15;
    cfg.swarm.n_particles = 8;
    cfg.swarm.seed = 42;
    cfg.output_dir = dir + "/out";
    cfg.measure_time = false;
    return cfg;
}

void write_fixture_images(const std::string &dir) {
    write_image(testutil::synth_bimodal(96, 96, 21), dir + "/img_a.png");
    write_image(testutil::synth_bands(96, 96, 22), dir + "/img_b.png");
}

} // namespace

TEST_CASE("per-run seeds are stable and pairwise distinct") {
    const std::uint64_t master = 7;
    const std::uint64_t s =
        derive_run_seed(master, "x.png", Objective::otsu, 2, Algorithm::chpso, 0);
    CHECK(s == derive_run_seed(master, "x.png", Objective::otsu, 2,
                               Algorithm::chpso, 0));

    std::set<std::uint64_t> seen;
    for (const std::string &img : {"x.png", "y.png"})
        for (Objective o : {Objective::otsu, Objective::kapur})
            for (int m : {2, 3, 4, 5})
                for (int run = 0; run < 50; ++run)
                    seen.insert(derive_run_seed(master, img, o, m,
                                                Algorithm::chpso, run));
    CHECK(seen.size() == 2u * 2 * 4 * 50);
}

TEST_CASE("experiment produces the exact cartesian product") {
    const std::string dir = testutil::temp_dir("exp_product");
    write_fixture_images(dir);
    const ExperimentConfig cfg = small_config(dir);
    const ExperimentOutput out = run_experiment(cfg);

    // 2 images x 2 objectives x 1 level x (3 chpso runs + 1 dp run)
    CHECK(out.runs.size() == 2u * 2 * 1 * 4);
    CHECK(out.aggregates.size() == 2u * 2 * 1 * 2);
    CHECK(out.failures.empty());

    for (const AggregateRow &row : out.aggregates)
        CHECK(row.runs == (is_oracle(row.algorithm) ? 1 : 3));
}

TEST_CASE("reported fitness is recomputable and bounded by the oracle") {
    const std::string dir = testutil::temp_dir("exp_recompute");
    write_fixture_images(dir);
    const ExperimentConfig cfg = small_config(dir);
    const ExperimentOutput out = run_experiment(cfg);

    for (const RunReport &r : out.runs) {
        const GrayImage img = load_image(r.image);
        const ObjectiveSpec spec =
            make_objective(r.objective, build_histogram(img));
        CHECK(fitness(spec, r.thresholds) == r.fitness);
        CHECK(dp_search(spec, r.m).fitness >= r.fitness);
    }

    // the dp aggregate row is the reference optimum
    for (const AggregateRow &row : out.aggregates) {
        if (row.algorithm != Algorithm::dp) continue;
        const GrayImage img = load_image(row.image);
        const ObjectiveSpec spec =
            make_objective(row.objective, build_histogram(img));
        CHECK(row.best_fitness == dp_search(spec, row.m).fitness);
    }
}

TEST_CASE("csv files round-trip the aggregate arithmetic") {
    const std::string dir = testutil::temp_dir("exp_csv");
    write_fixture_images(dir);
    const ExperimentConfig cfg = small_config(dir);
    const ExperimentOutput out = run_experiment(cfg);
    emit_csv(out, cfg.output_dir);

    const auto runs = parse_csv(slurp(cfg.output_dir + "/runs.csv"));
    const auto summary = parse_csv(slurp(cfg.output_dir + "/summary.csv"));
    REQUIRE(runs.size() == out.runs.size() + 1);
    REQUIRE(summary.size() == out.aggregates.size() + 1);
    CHECK(runs[0][0] == "image");
    CHECK(runs[0][7] == "fitness");
    CHECK(summary[0][8] == "std_fitness");

    // recompute each summary row's std from the matching runs.csv rows
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const auto &srow = summary[i];
        std::vector<double> fits;
        for (std::size_t j = 1; j < runs.size(); ++j) {
            const auto &rrow = runs[j];
            if (rrow[0] == srow[0] && rrow[1] == srow[1] && rrow[2] == srow[2] &&
                rrow[3] == srow[3])
                fits.push_back(std::stod(rrow[7]));
        }
        REQUIRE(fits.size() == static_cast<std::size_t>(std::stoi(srow[4])));
        CHECK(run_std(fits) == std::stod(srow[8]));
    }
}

TEST_CASE("identical configs give byte-identical csv files") {
    const std::string dir = testutil::temp_dir("exp_determinism");
    write_fixture_images(dir);
    ExperimentConfig cfg = small_config(dir);

    cfg.output_dir = dir + "/out1";
    emit_csv(run_experiment(cfg), cfg.output_dir);
    cfg.output_dir = dir + "/out2";
    emit_csv(run_experiment(cfg), cfg.output_dir);

    CHECK(slurp(dir + "/out1/runs.csv") == slurp(dir + "/out2/runs.csv"));
    CHECK(slurp(dir + "/out1/summary.csv") == slurp(dir + "/out2/summary.csv"));
}

TEST_CASE("worker count does not leak into the results") {
    const std::string dir = testutil::temp_dir("exp_threads");
    write_fixture_images(dir);
    ExperimentConfig cfg = small_config(dir);

    setenv("SWARMTHRESH_THREADS", "1", 1);
    cfg.output_dir = dir + "/t1";
    emit_csv(run_experiment(cfg), cfg.output_dir);
    setenv("SWARMTHRESH_THREADS", "3", 1);
    cfg.output_dir = dir + "/t3";
    emit_csv(run_experiment(cfg), cfg.output_dir);
    unsetenv("SWARMTHRESH_THREADS");

    CHECK(slurp(dir + "/t1/runs.csv") == slurp(dir + "/t3/runs.csv"));
    CHECK(slurp(dir + "/t1/summary.csv") == slurp(dir + "/t3/summary.csv"));
}

TEST_CASE("unreadable images are recorded and skipped") {
    const std::string dir = testutil::temp_dir("exp_failures");
    write_fixture_images(dir);
    ExperimentConfig cfg = small_config(dir);
    cfg.images.insert(cfg.images.begin(), dir + "/does_not_exist.png");
    cfg.output_dir = dir + "/out";

    const ExperimentOutput out = run_experiment(cfg);
    REQUIRE(out.failures.size() == 1);
    CHECK(out.failures[0].image == dir + "/does_not_exist.png");
    CHECK(out.runs.size() == 2u * 2 * 1 * 4); // the good images still ran
}

TEST_CASE("an all-failing config still writes header-only csvs") {
    const std::string dir = testutil::temp_dir("exp_empty");
    ExperimentConfig cfg;
    cfg.images = {dir + "/nope.png"};
    cfg.output_dir = dir + "/out";
    const ExperimentOutput out = run_experiment(cfg);
    CHECK(out.runs.empty());
    emit_csv(out, cfg.output_dir);
    const auto runs = parse_csv(slurp(cfg.output_dir + "/runs.csv"));
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].size() == 12);
}

TEST_CASE("segmented pngs land next to the csvs with the naming scheme") {
    const std::string dir = testutil::temp_dir("exp_write_seg");
    write_fixture_images(dir);
    ExperimentConfig cfg = small_config(dir);
    cfg.images = {dir + "/img_a.png"};
    cfg.objectives = {Objective::otsu};
    cfg.algorithms = {Algorithm::dp};
    cfg.write_segmented = true;
    cfg.output_dir = dir + "/seg_out";
    run_experiment(cfg);
    CHECK(std::filesystem::exists(cfg.output_dir + "/img_a_otsu_m2_dp.png"));
    const GrayImage seg = load_image(cfg.output_dir + "/img_a_otsu_m2_dp.png");
    CHECK(seg.width == 96);
}

TEST_CASE("ten images, both objectives, four levels: 80 aggregate rows") {
    const std::string dir = testutil::temp_dir("exp_protocol");
    ExperimentConfig cfg;
    for (int i = 0; i < 10; ++i) {
        const std::string path = dir + "/img" + std::to_string(i) + ".png";
        write_image(testutil::synth_texture(48, 48, 100 + i), path);
        cfg.images.push_back(path);
    }
    cfg.algorithms = {Algorithm::chpso};
    cfg.runs = 2;
    cfg.swarm.n_iterations = 5;
    cfg.swarm.n_particles = 8;
    cfg.measure_time = false;
    const ExperimentOutput out = run_experiment(cfg);
    CHECK(out.aggregates.size() == 80);             // 10 x 2 x 4 x 1
    CHECK(out.runs.size() == 80u * cfg.runs);
}

TEST_CASE("config validation rejects unusable settings") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(run_experiment(cfg), InvalidParams); // no images

    cfg.images = {"whatever.png"};
    cfg.levels = {4};
    cfg.algorithms = {Algorithm::exhaustive};
    CHECK_THROWS_AS(run_experiment(cfg), InvalidParams); // exhaustive m=4

    ExperimentConfig bad_runs;
    bad_runs.images = {"x.png"};
    bad_runs.runs = 0;
    CHECK_THROWS_AS(run_experiment(bad_runs), InvalidParams);
}
