// Command-line driver: generate latent structures, synthesize observations,
// run posterior inference, evaluate reconstructions, and sweep experiment
// grids. Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hgr/estimators.hpp"
#include "hgr/generators.hpp"
#include "hgr/inference.hpp"
#include "hgr/io.hpp"
#include "hgr/labels.hpp"
#include "hgr/likelihood.hpp"
#include "hgr/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hgr;

namespace {

void echo_structure_summary(const Hypergraph& h) {
    double e_delta = 0.0;
    bool defined = h.h1() > 0;
    if (defined) e_delta = edge_triangle_fraction(h);
    std::cout << "n " << h.n() << "\nh1 " << h.h1() << "\nh2 " << h.h2() << "\nE_delta ";
    if (defined) std::cout << e_delta;
    else std::cout << "undefined";
    std::cout << "\n";
}

struct GenerateArgs {
    std::string model;
    std::string out;
    std::string input;       // bipartite CSV
    std::string names_out;   // bipartite vertex-name mapping
    std::uint64_t seed = 1;
    std::uint32_t n = 100;
    double q = 0.019, p = 0.00017;
    std::vector<std::uint32_t> sizes = {30, 70};
    double q11 = 0.05, q12 = 0.001, q22 = 0.02, p1 = 0.005, p2 = 0.0001, pout = 0.00001;
    double mean2 = 2.0, mean3 = 3.0;
    double bmean2 = -4.5, bsd2 = 2.5, bmean3 = -5.0, bsd3 = 2.0;
    std::uint32_t cliques = 20, clique_size = 5;
    double promote = 0.19;
    std::uint32_t max_group = 5;
};

int run_generate(const GenerateArgs& a) {
    Rng rng(a.seed);
    Hypergraph h;
    if (a.model == "prior") {
        h = random_hypergraph(a.n, a.p, a.q, rng);
    } else if (a.model == "best") {
        h = best_case_hypergraph(a.n, a.p, a.q, rng);
    } else if (a.model == "worst") {
        h = worst_case_hypergraph(a.cliques, a.clique_size, a.promote, rng);
    } else if (a.model == "sbm") {
        SbmParams params;
        if (a.sizes.size() != 2) throw std::invalid_argument("--sizes expects two communities");
        params.community_sizes = {a.sizes[0], a.sizes[1]};
        params.q11 = a.q11; params.q12 = a.q12; params.q22 = a.q22;
        params.p1 = a.p1; params.p2 = a.p2; params.p_out = a.pout;
        h = hypergraph_sbm(params, rng);
    } else if (a.model == "cm") {
        h = triangle_edge_cm(a.n, a.mean2, a.mean3, rng);
    } else if (a.model == "beta") {
        BetaModelParams params;
        params.mean2 = a.bmean2; params.sd2 = a.bsd2;
        params.mean3 = a.bmean3; params.sd3 = a.bsd3;
        h = beta_model_hypergraph(a.n, params, rng);
    } else if (a.model == "bipartite") {
        if (a.input.empty()) throw std::invalid_argument("--input is required for bipartite");
        const BipartiteResult res = bipartite_to_hypergraph(io::read_bipartite_csv(a.input),
                                                            a.max_group);
        h = res.hypergraph;
        if (!a.names_out.empty()) {
            std::ostringstream names;
            names << "# index,entity\n";
            for (Vertex v = 0; v < Vertex(res.vertex_names.size()); ++v)
                names << v << "," << res.vertex_names[v] << "\n";
            io::write_text_file(a.names_out, names.str());
        }
        std::cout << "dropped_groups " << res.dropped_groups << "\n";
    }
    io::write_hypergraph(h, a.out);
    echo_structure_summary(h);
    return 0;
}

struct ObserveArgs {
    std::string structure, out;
    double mu0 = 0.01, mu1 = 20.0, mu2 = 30.0;
    std::uint64_t seed = 1;
};

int run_observe(const ObserveArgs& a) {
    const Hypergraph h = io::read_hypergraph(a.structure);
    const RateParams mu{a.mu0, a.mu1, a.mu2};
    if (!(mu.mu0 >= 0 && mu.mu1 >= 0 && mu.mu2 >= 0))
        throw std::invalid_argument("rates must be non-negative");
    if (!(mu.mu0 < mu.mu1 && mu.mu0 < mu.mu2))
        throw std::invalid_argument("rate ordering violated: need mu0 < mu1 and mu0 < mu2");
    const ObservationMatrix x =
        generate_observations_parallel(project_labels(h), mu, Rng(a.seed));
    io::write_observations(x, a.out);
    std::cout << "n " << x.n() << "\ntotal_count " << x.total() << "\n";
    return 0;
}

struct InferArgs {
    std::string data, model, config, truth, out;
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n_samples, stride, iter_min, iter_max;
    std::optional<int> chains;
};

int run_infer(const InferArgs& a) {
    io::RunConfig cfg;
    if (!a.config.empty()) cfg = io::read_run_config(a.config);
    cfg.model = a.model == "hypergraph" ? ModelKind::hypergraph : ModelKind::categorical;
    if (a.seed) cfg.mcmc.master_seed = *a.seed;
    if (a.n_samples) cfg.mcmc.n_samples = *a.n_samples;
    if (a.stride) cfg.mcmc.sample_stride = *a.stride;
    if (a.iter_min) cfg.mcmc.iter_min = *a.iter_min;
    if (a.iter_max) cfg.mcmc.iter_max = *a.iter_max;
    if (a.chains) cfg.mcmc.n_chains = *a.chains;

    std::optional<Hypergraph> truth;
    if (!a.truth.empty()) {
        truth = io::read_hypergraph(a.truth);
        cfg.init = InitMode::ground_truth;
        if (!cfg.true_mu)
            throw std::invalid_argument(
                "ground-truth initialization needs true_mu in the config file");
    }
    cfg.validate();

    const ObservationMatrix x = io::read_observations(a.data);
    const ChainTrace trace = run_inference(
        cfg.model, x, cfg.mcmc, cfg.hyperparams, cfg.init,
        truth ? &*truth : nullptr, cfg.true_mu ? &*cfg.true_mu : nullptr, a.threads);

    io::ResultBundle bundle;
    bundle.config = cfg;
    bundle.observations = x;
    bundle.trace = trace;

    json out = io::result_bundle_to_json(bundle);
    // Estimator summaries for quick inspection.
    const PosteriorSample& map = map_estimate(trace);
    out["estimators"] = json::object();
    out["estimators"]["map_log_joint"] = map.log_joint;
    out["estimators"]["map_mu"] = {map.mu.mu0, map.mu.mu1, map.mu.mu2};
    if (cfg.model == ModelKind::hypergraph) {
        const auto ew = std::get<Hypergraph>(edgewise_estimate(trace));
        out["estimators"]["map_h1"] = map.hypergraph().h1();
        out["estimators"]["map_h2"] = map.hypergraph().h2();
        out["estimators"]["edgewise_h1"] = ew.h1();
        out["estimators"]["edgewise_h2"] = ew.h2();
    } else {
        const auto ew = std::get<CategoricalGraph>(edgewise_estimate(trace));
        out["estimators"]["map_m1"] = map.graph().m1();
        out["estimators"]["map_m2"] = map.graph().m2();
        out["estimators"]["edgewise_m1"] = ew.m1();
        out["estimators"]["edgewise_m2"] = ew.m2();
    }
    io::write_text_file(a.out, out.dump(2) + "\n");

    std::cout << "model " << model_name(cfg.model) << "\nconverged "
              << (trace.converged ? "yes" : "no") << "\nsamples " << trace.samples.size()
              << "\nmean_sample_loglik " << trace.mean_sample_loglik() << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string result, truth, out_prefix;
    int n_pred = 200;
    std::uint64_t seed = 12345;
    std::vector<double> true_mu;
};

std::string band_tsv_row(const std::string& name, const PercentileBand& b) {
    std::ostringstream os;
    os << name << "\t" << b.median << "\t" << b.p025 << "\t" << b.p25 << "\t" << b.p75 << "\t"
       << b.p975 << "\n";
    return os.str();
}

int run_evaluate(const EvaluateArgs& a) {
    const io::ResultBundle bundle = io::read_result_bundle(a.result);
    const Hypergraph truth = io::read_hypergraph(a.truth);
    if (truth.n() != bundle.observations.n())
        throw std::invalid_argument("truth/observation dimension mismatch");

    std::optional<RateParams> true_mu;
    if (!a.true_mu.empty()) {
        if (a.true_mu.size() != 3) throw std::invalid_argument("--true-mu expects three values");
        true_mu = RateParams{a.true_mu[0], a.true_mu[1], a.true_mu[2]};
    } else if (bundle.config.true_mu) {
        true_mu = bundle.config.true_mu;
    }

    Rng rng(a.seed);
    const MetricsReport report =
        compute_metrics(truth, bundle.observations, bundle.trace, bundle.config.model,
                        a.n_pred, rng, true_mu ? &*true_mu : nullptr);

    json metrics;
    metrics["epsilon"] = report.epsilon ? json(*report.epsilon) : json();
    metrics["entropy"] = report.entropy.entropy;
    metrics["rho"] = report.entropy.rho;
    metrics["e_delta"] = report.e_delta ? json(*report.e_delta) : json();
    metrics["reporting_rule_fired"] = report.reporting_rule_fired;
    metrics["rate_order_swapped"] = report.rate_order_swapped;
    metrics["confusion"] = report.confusion_matrix.c;
    json norm = json::array();
    for (int r = 0; r < 3; ++r) norm.push_back(report.normalized.c[r]);
    metrics["normalized_confusion"] = norm;
    json residuals = json::object();
    const char* keys[3] = {"R0", "R1", "R2"};
    for (int k = 0; k < 3; ++k)
        residuals[keys[k]] = {{"median", report.residuals[k].median},
                              {"p025", report.residuals[k].p025},
                              {"p25", report.residuals[k].p25},
                              {"p75", report.residuals[k].p75},
                              {"p975", report.residuals[k].p975}};
    metrics["residuals"] = residuals;
    io::write_text_file(a.out_prefix + "_metrics.json", metrics.dump(2) + "\n");

    std::ostringstream confusion;
    confusion << "true\\pred\t0\t1\t2\n";
    for (int r = 0; r < 3; ++r)
        confusion << r << "\t" << report.confusion_matrix.c[r][0] << "\t"
                  << report.confusion_matrix.c[r][1] << "\t" << report.confusion_matrix.c[r][2]
                  << "\n";
    io::write_text_file(a.out_prefix + "_confusion.tsv", confusion.str());

    std::ostringstream normalized;
    normalized << "true\\pred\t0\t1\t2\tdefined\n";
    for (int r = 0; r < 3; ++r)
        normalized << r << "\t" << report.normalized.c[r][0] << "\t" << report.normalized.c[r][1]
                   << "\t" << report.normalized.c[r][2] << "\t"
                   << (report.normalized.row_defined[r] ? 1 : 0) << "\n";
    io::write_text_file(a.out_prefix + "_normalized_confusion.tsv", normalized.str());

    std::ostringstream res;
    res << "metric\tmedian\tp025\tp25\tp75\tp975\n";
    for (int k = 0; k < 3; ++k) res << band_tsv_row(keys[k], report.residuals[k]);
    io::write_text_file(a.out_prefix + "_residuals.tsv", res.str());

    std::cout << "epsilon ";
    if (report.epsilon) std::cout << *report.epsilon;
    else std::cout << "undefined";
    std::cout << "\nentropy " << report.entropy.entropy << "\nE_delta ";
    if (report.e_delta) std::cout << *report.e_delta;
    else std::cout << "undefined";
    std::cout << "\n";
    return 0;
}

// --- experiment grids ---------------------------------------------------------

struct ExperimentCell {
    std::size_t value_index = 0;
    int replicate = 0;
    ModelKind model = ModelKind::hypergraph;
    bool ok = false;
    std::string error;
    double epsilon = 0.0;
    double entropy = 0.0;
    double residual_median[3] = {0, 0, 0};
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m == 0 ? 0.0 : (m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]));
}

std::string percentile_row(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto pct = [&](double p) {
        if (v.empty()) return 0.0;
        const double idx = p * double(v.size() - 1);
        const std::size_t lo = std::size_t(idx);
        const std::size_t hi = std::size_t(std::ceil(idx));
        const double w = idx - double(lo);
        return v[lo] * (1 - w) + v[hi] * w;
    };
    std::ostringstream os;
    os << median_of(v) << "\t" << pct(0.025) << "\t" << pct(0.25) << "\t" << pct(0.75) << "\t"
       << pct(0.975);
    return os.str();
}

int run_experiment(const std::string& spec_path, const std::string& out_dir) {
    const json spec = json::parse(io::read_text_file(spec_path));
    fs::create_directories(out_dir);

    // Structure source: explicit file or named generator.
    Hypergraph structure;
    const json& sj = spec.at("structure");
    const std::uint64_t seed = spec.value("seed", std::uint64_t{1});
    if (sj.contains("file")) {
        structure = io::read_hypergraph(sj.at("file").get<std::string>());
    } else {
        const std::string kind = sj.at("generator").get<std::string>();
        Rng rng(seed ^ 0x5eedULL);
        if (kind == "prior")
            structure = random_hypergraph(sj.at("n").get<Vertex>(), sj.at("p").get<double>(),
                                          sj.at("q").get<double>(), rng);
        else if (kind == "best")
            structure = best_case_hypergraph(sj.at("n").get<Vertex>(), sj.at("p").get<double>(),
                                             sj.at("q").get<double>(), rng);
        else if (kind == "worst")
            structure = worst_case_hypergraph(sj.at("cliques").get<std::uint32_t>(),
                                              sj.at("size").get<std::uint32_t>(),
                                              sj.at("promote").get<double>(), rng);
        else
            throw std::invalid_argument("unknown structure generator '" + kind + "'");
    }

    const std::string vary = spec.value("vary", std::string("mu1"));
    if (vary != "mu1" && vary != "mu2")
        throw std::invalid_argument("vary must be 'mu1' or 'mu2'");
    const std::vector<double> values = spec.at("values").get<std::vector<double>>();
    const int replicates = spec.value("replicates", 10);
    const int n_pred = spec.value("n_pred", 200);
    const double mu0 = spec.value("mu0", 0.01);
    const double fixed_rate = spec.value(vary == "mu1" ? "mu2" : "mu1", 50.0);

    std::vector<ModelKind> models;
    for (const auto& m : spec.value("models", std::vector<std::string>{"hypergraph",
                                                                       "categorical"}))
        models.push_back(m == "hypergraph" ? ModelKind::hypergraph : ModelKind::categorical);

    io::RunConfig base_cfg;
    if (spec.contains("mcmc"))
        base_cfg = io::run_config_from_json(json{{"mcmc", spec.at("mcmc")}});
    const InitMode init =
        spec.value("init", std::string("truth")) == "truth" ? InitMode::ground_truth
                                                            : InitMode::from_data;
    const int workers = spec.value("workers", 0);

    // Flat cell list: value x replicate x model.
    std::vector<ExperimentCell> cells;
    for (std::size_t vi = 0; vi < values.size(); ++vi)
        for (int rep = 0; rep < replicates; ++rep)
            for (const ModelKind m : models)
                cells.push_back(ExperimentCell{vi, rep, m, false, "", 0, 0, {0, 0, 0}});

    const LabelMatrix labels = project_labels(structure);
    std::atomic<int> failures{0};

    const int nw = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic) num_threads(nw)
    for (std::int64_t ci = 0; ci < std::int64_t(cells.size()); ++ci) {
        ExperimentCell& cell = cells[ci];
        try {
            const double varied = values[cell.value_index];
            RateParams mu;
            mu.mu0 = mu0;
            mu.mu1 = vary == "mu1" ? varied : fixed_rate;
            mu.mu2 = vary == "mu2" ? varied : fixed_rate;

            // Deterministic per-cell seeds from (seed, value, replicate).
            std::uint64_t stream = seed ^ (0x9e3779b97f4a7c15ULL * (cell.value_index + 1));
            stream = splitmix64(stream);
            stream ^= 0xbf58476d1ce4e5b9ULL * std::uint64_t(cell.replicate + 1);
            const std::uint64_t data_seed = splitmix64(stream);

            const ObservationMatrix x = generate_observations(labels, mu, Rng(data_seed));

            McmcConfig mcmc = base_cfg.mcmc;
            mcmc.master_seed = splitmix64(stream) ^ (cell.model == ModelKind::hypergraph ? 1 : 2);
            const ChainTrace trace =
                run_inference(cell.model, x, mcmc, base_cfg.hyperparams, init, &structure, &mu, 1);

            Rng metric_rng(data_seed ^ 0xabcdef);
            const MetricsReport report = compute_metrics(structure, x, trace, cell.model,
                                                         n_pred, metric_rng, &mu);
            if (!report.epsilon) throw std::runtime_error("epsilon undefined for this cell");
            cell.epsilon = *report.epsilon;
            cell.entropy = report.entropy.entropy;
            for (int k = 0; k < 3; ++k) cell.residual_median[k] = report.residuals[k].median;
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.error = e.what();
            failures.fetch_add(1);
        }
    }

    // Aggregate per (value, model, metric).
    std::ostringstream tsv;
    tsv << "param\tvalue\tmodel\tmetric\tmedian\tp025\tp25\tp75\tp975\tn_ok\tn_fail\n";
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        for (const ModelKind m : models) {
            std::vector<double> eps, ent, r0, r1, r2;
            int n_ok = 0, n_fail = 0;
            for (const auto& cell : cells) {
                if (cell.value_index != vi || cell.model != m) continue;
                if (!cell.ok) { ++n_fail; continue; }
                ++n_ok;
                eps.push_back(cell.epsilon);
                ent.push_back(cell.entropy);
                r0.push_back(cell.residual_median[0]);
                r1.push_back(cell.residual_median[1]);
                r2.push_back(cell.residual_median[2]);
            }
            const auto row = [&](const char* metric, const std::vector<double>& v) {
                tsv << vary << "\t" << values[vi] << "\t" << model_name(m) << "\t" << metric
                    << "\t" << percentile_row(v) << "\t" << n_ok << "\t" << n_fail << "\n";
            };
            row("epsilon", eps);
            row("entropy", ent);
            row("R0", r0);
            row("R1", r1);
            row("R2", r2);
        }
    }
    io::write_text_file((fs::path(out_dir) / "sweep.tsv").string(), tsv.str());

    // Per-cell log plus manifest for reproducibility.
    std::ostringstream cells_tsv;
    cells_tsv << "value\treplicate\tmodel\tok\tepsilon\tentropy\terror\n";
    for (const auto& cell : cells)
        cells_tsv << values[cell.value_index] << "\t" << cell.replicate << "\t"
                  << model_name(cell.model) << "\t" << (cell.ok ? 1 : 0) << "\t" << cell.epsilon
                  << "\t" << cell.entropy << "\t" << cell.error << "\n";
    io::write_text_file((fs::path(out_dir) / "cells.tsv").string(), cells_tsv.str());

    json manifest;
    manifest["spec"] = spec;
    manifest["version"] = io::kLibraryVersion;
    manifest["structure_h1"] = structure.h1();
    manifest["structure_h2"] = structure.h2();
    manifest["cells_total"] = cells.size();
    manifest["cells_failed"] = failures.load();
    io::write_text_file((fs::path(out_dir) / "manifest.json").string(),
                        manifest.dump(2) + "\n");

    std::cout << "cells " << cells.size() << "\nfailed " << failures.load() << "\nout "
              << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent hypergraph and categorical-edge graph inference from noisy pair counts"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Draw a latent structure and write it out");
    generate->add_option("--model", gen.model, "Generator")
        ->required()
        ->check(CLI::IsMember({"prior", "sbm", "cm", "beta", "best", "worst", "bipartite"}));
    generate->add_option("--out", gen.out, "Output hypergraph file")->required();
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("--n", gen.n, "Vertex count");
    generate->add_option("--q", gen.q, "2-edge probability (prior/best)");
    generate->add_option("--p", gen.p, "3-edge probability (prior/best)");
    generate->add_option("--sizes", gen.sizes, "SBM community sizes")->expected(2);
    generate->add_option("--q11", gen.q11, "SBM 2-edge probability, community 1");
    generate->add_option("--q12", gen.q12, "SBM 2-edge probability, across");
    generate->add_option("--q22", gen.q22, "SBM 2-edge probability, community 2");
    generate->add_option("--p1", gen.p1, "SBM 3-edge probability, community 1");
    generate->add_option("--p2", gen.p2, "SBM 3-edge probability, community 2");
    generate->add_option("--pout", gen.pout, "SBM 3-edge probability, across");
    generate->add_option("--mean2", gen.mean2, "CM geometric mean degree, 2-edges");
    generate->add_option("--mean3", gen.mean3, "CM geometric mean degree, 3-edges");
    generate->add_option("--bmean2", gen.bmean2, "beta-model propensity mean, 2-edges");
    generate->add_option("--bsd2", gen.bsd2, "beta-model propensity sd, 2-edges");
    generate->add_option("--bmean3", gen.bmean3, "beta-model propensity mean, 3-edges");
    generate->add_option("--bsd3", gen.bsd3, "beta-model propensity sd, 3-edges");
    generate->add_option("--cliques", gen.cliques, "worst-case clique count");
    generate->add_option("--size", gen.clique_size, "worst-case clique size");
    generate->add_option("--promote", gen.promote, "worst-case promotion probability");
    generate->add_option("--input", gen.input, "bipartite entity,group CSV");
    generate->add_option("--names", gen.names_out, "write the bipartite vertex-name mapping");
    generate->add_option("--max-group", gen.max_group, "bipartite group-size cap");

    ObserveArgs obs;
    auto* observe = app.add_subcommand("observe", "Sample pairwise counts from a structure");
    observe->add_option("--structure", obs.structure, "Hypergraph file")->required();
    observe->add_option("--out", obs.out, "Output CSV")->required();
    observe->add_option("--mu0", obs.mu0, "Rate of non-interacting pairs")->required();
    observe->add_option("--mu1", obs.mu1, "Rate of 2-edge pairs")->required();
    observe->add_option("--mu2", obs.mu2, "Rate of covered pairs")->required();
    observe->add_option("--seed", obs.seed, "RNG seed");

    InferArgs inf;
    auto* infer = app.add_subcommand("infer", "Posterior sampling on an observation matrix");
    infer->add_option("--data", inf.data, "Observation CSV")->required();
    infer->add_option("--model", inf.model, "Structural model")
        ->required()
        ->check(CLI::IsMember({"hypergraph", "categorical"}));
    infer->add_option("--out", inf.out, "Result bundle JSON")->required();
    infer->add_option("--config", inf.config, "Run-config JSON");
    infer->add_option("--truth", inf.truth, "Ground-truth hypergraph (enables truth init)");
    infer->add_option("--threads", inf.threads, "Worker threads for parallel chains");
    infer->add_option("--seed", inf.seed, "Override master seed");
    infer->add_option("--samples", inf.n_samples, "Override retained sample count");
    infer->add_option("--stride", inf.stride, "Override sweeps between samples");
    infer->add_option("--iter-min", inf.iter_min, "Override minimum proposals");
    infer->add_option("--iter-max", inf.iter_max, "Override maximum proposals");
    infer->add_option("--chains", inf.chains, "Override chain count");

    EvaluateArgs eval;
    auto* evaluate = app.add_subcommand("evaluate", "Diagnostics against a ground truth");
    evaluate->add_option("--result", eval.result, "Result bundle JSON")->required();
    evaluate->add_option("--truth", eval.truth, "Ground-truth hypergraph file")->required();
    evaluate->add_option("--out-prefix", eval.out_prefix, "Output file prefix")->required();
    evaluate->add_option("--n-pred", eval.n_pred, "Posterior-predictive matrices");
    evaluate->add_option("--seed", eval.seed, "Tie-break / predictive seed");
    evaluate->add_option("--true-mu", eval.true_mu, "Generating rates (three values)")
        ->expected(3);

    std::string exp_spec, exp_out;
    auto* experiment = app.add_subcommand("experiment", "Run a rate-sweep grid");
    experiment->add_option("--spec", exp_spec, "Grid spec JSON")->required();
    experiment->add_option("--out-dir", exp_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (generate->parsed()) return run_generate(gen);
        if (observe->parsed()) return run_observe(obs);
        if (infer->parsed()) return run_infer(inf);
        if (evaluate->parsed()) return run_evaluate(eval);
        if (experiment->parsed()) return run_experiment(exp_spec, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
