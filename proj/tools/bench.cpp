// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce the same answer.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "swarmthresh/experiment.hpp"
#include "swarmthresh/histogram.hpp"
#include "swarmthresh/image.hpp"
#include "swarmthresh/metrics.hpp"
#include "swarmthresh/oracle.hpp"
#include "swarmthresh/parallel.hpp"
#include "swarmthresh/rng.hpp"
#include "swarmthresh/segment.hpp"

using namespace swarmthresh;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(F &&f, int reps = 3) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        const double dt =
            std::chrono::duration<double>(Clock::now() - t0).count();
        if (dt < best) best = dt;
    }
    return best;
}

void row(const char *name, double serial_s, double parallel_s, bool match) {
    std::printf("%-28s %10.2f ms %10.2f ms %7.2fx   %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                match ? "match" : "MISMATCH");
}

GrayImage big_noise_image(int w, int h) {
    Rng rng(7);
    GrayImage img{w, h, {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (auto &p : img.pixels)
        p = static_cast<std::uint8_t>(rng.next_u64() & 0xFF);
    return img;
}

} // namespace

int main() {
    std::printf("workers: %d\n\n", worker_count());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp",
                "speedup");

    const GrayImage big = big_noise_image(4096, 2048);
    const GrayImage small = big_noise_image(256, 256);

    {
        Histogram hs, hp;
        const double ts = best_of([&] { hs = serial::build_histogram(big); });
        const double tp = best_of([&] { hp = build_histogram(big); });
        row("histogram 4096x2048", ts, tp, hs.counts == hp.counts);
    }

    const Histogram hist = build_histogram(small);
    {
        const SegmentedImage seg = segment(big, ThresholdVector{{64, 128, 192}});
        double ms = 0, mp = 0;
        const double ts = best_of([&] { ms = serial::mse(big, seg.reconstructed); });
        const double tp = best_of([&] { mp = mse(big, seg.reconstructed); });
        row("mse 4096x2048", ts, tp, ms == mp);
    }
    {
        const SegmentedImage seg = segment(big, ThresholdVector{{64, 128, 192}});
        double us = 0, up = 0;
        const double ts = best_of([&] { us = serial::uniformity(seg, big, 3); });
        const double tp = best_of([&] { up = uniformity(seg, big, 3); });
        row("uniformity 4096x2048", ts, tp, std::abs(us - up) < 1e-12);
    }

    for (Objective kind : {Objective::otsu, Objective::kapur}) {
        const ObjectiveSpec spec = make_objective(kind, hist);
        OracleResult rs, rp;
        const double ts = best_of([&] { rs = serial::exhaustive_search(spec, 3); }, 1);
        const double tp = best_of([&] { rp = exhaustive_search(spec, 3); }, 1);
        const std::string name =
            std::string("exhaustive m=3 ") + to_string(kind);
        row(name.c_str(), ts, tp,
            rs.fitness == rp.fitness &&
                rs.thresholds.values == rp.thresholds.values);
    }
    {
        const ObjectiveSpec spec = make_objective(Objective::otsu, hist);
        OracleResult rs, rp;
        const double ts = best_of([&] { rs = serial::dp_search(spec, 128); });
        const double tp = best_of([&] { rp = dp_search(spec, 128); });
        row("dp m=128 otsu", ts, tp,
            rs.fitness == rp.fitness &&
                rs.thresholds.values == rp.thresholds.values);
    }

    {
        // the experiment runner parallelizes across runs; pin one worker to
        // get the serial baseline
        const std::string dir = "/tmp/swarmthresh_bench";
        ExperimentConfig cfg;
        write_image(small, dir + std::string("_img.png"));
        cfg.images = {dir + std::string("_img.png")};
        cfg.objectives = {Objective::otsu};
        cfg.levels = {5};
        cfg.runs = 20;
        cfg.measure_time = false;

        ExperimentOutput a, b;
        setenv("SWARMTHRESH_THREADS", "1", 1);
        const double ts = best_of([&] { a = run_experiment(cfg); }, 1);
        unsetenv("SWARMTHRESH_THREADS");
        const double tp = best_of([&] { b = run_experiment(cfg); }, 1);
        bool match = a.runs.size() == b.runs.size();
        for (std::size_t i = 0; match && i < a.runs.size(); ++i)
            match = a.runs[i].fitness == b.runs[i].fitness &&
                    a.runs[i].thresholds.values == b.runs[i].thresholds.values;
        row("experiment 20 chpso runs", ts, tp, match);
    }
    return 0;
}
