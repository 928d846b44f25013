// Timing harness comparing the serial reference kernels with their OpenMP
// counterparts, plus serial-vs-parallel multi-chain inference.

#include <chrono>
#include <cstdio>
#include <functional>

#include "hgr/generators.hpp"
#include "hgr/inference.hpp"
#include "hgr/labels.hpp"
#include "hgr/likelihood.hpp"
#include "hgr/estimators.hpp"
#include "hgr/parallel.hpp"

using namespace hgr;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto start = clock_type::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto stop = clock_type::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-34s %10.3f ms %10.3f ms %7.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", hardware_threads());
    std::printf("%-34s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

    Rng rng(1);
    const Vertex n = 400;
    const Hypergraph h = random_hypergraph(n, 0.0002, 0.02, rng);
    const LabelMatrix labels = project_labels(h);
    const RateParams mu{0.05, 20.0, 35.0};
    const ObservationMatrix x = generate_observations_parallel(labels, mu, Rng(2));

    report("sufficient_stats (n=400)",
           time_ms([&] { (void)sufficient_stats(x, labels); }, 50),
           time_ms([&] { (void)sufficient_stats_parallel(x, labels); }, 50));

    report("log_likelihood (n=400)",
           time_ms([&] { (void)log_likelihood(x, labels, mu); }, 50),
           time_ms([&] { (void)log_likelihood_parallel(x, labels, mu); }, 50));

    report("generate_observations (n=400)",
           time_ms([&] { (void)generate_observations(labels, mu, Rng(3)); }, 20),
           time_ms([&] { (void)generate_observations_parallel(labels, mu, Rng(3)); }, 20));

    // Posterior-predictive residuals over a single-sample trace.
    {
        ChainTrace trace;
        PosteriorSample s;
        s.structure = h;
        s.mu = mu;
        s.probs = StructureProbs(HypergraphProbs{0.02, 0.0002});
        trace.samples.push_back(s);
        Rng r1(4), r2(4);
        report("predictive residuals (200 draws)",
               time_ms([&] { (void)posterior_predictive_residuals(x, trace, 200, r1, 1); }, 3),
               time_ms([&] { (void)posterior_predictive_residuals(x, trace, 200, r2, 0); }, 3));
    }

    // Four chains on a Zachary-sized instance, serial vs parallel workers.
    {
        const Hypergraph small = random_hypergraph(34, 0.002, 0.05, rng);
        const ObservationMatrix xs =
            generate_observations_parallel(project_labels(small), mu, Rng(5));
        McmcConfig cfg;
        cfg.window_w = 2000;
        cfg.iter_min = 20000;
        cfg.iter_max = 100000;
        cfg.n_samples = 20;
        cfg.sample_stride = 10;
        cfg.n_chains = 4;
        cfg.master_seed = 9;
        const dist::Hyperparams hp;
        report("run_inference (4 chains, n=34)",
               time_ms([&] { (void)run_inference(ModelKind::hypergraph, xs, cfg, hp,
                                                 InitMode::from_data, nullptr, nullptr, 1); }, 1),
               time_ms([&] { (void)run_inference(ModelKind::hypergraph, xs, cfg, hp,
                                                 InitMode::from_data, nullptr, nullptr, 0); }, 1));
    }
    return 0;
}
