#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hgr/estimators.hpp"
#include "hgr/generators.hpp"
#include "hgr/inference.hpp"
#include "hgr/labels.hpp"
#include "hgr/likelihood.hpp"
#include "oracles.hpp"

using namespace hgr;

namespace {

McmcConfig small_cfg() {
    McmcConfig cfg;
    cfg.window_w = 200;
    cfg.iter_min = 400;
    cfg.iter_max = 20000;
    cfg.n_samples = 20;
    cfg.sample_stride = 5;
    cfg.n_chains = 2;
    return cfg;
}

}  // namespace

TEST_CASE("structure-probability conditionals match Beta means") {
    const dist::Hyperparams hp;
    Rng rng(601);

    SUBCASE("empty hypergraph, n = 10") {
        const Hypergraph h(10);
        const double expect_q = hp.xi / (45.0 + hp.xi + hp.zeta);
        double sum = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i)
            sum += resample_structure_probs(h, hp, rng).hypergraph().q;
        // Beta variance bound: m(1-m)/(a+b+1).
        const double var = expect_q * (1 - expect_q) / (hp.xi + 45.0 + hp.zeta + 1.0);
        CHECK(std::fabs(sum / n - expect_q) < 3.0 * std::sqrt(var / n));
    }
    SUBCASE("full 2-edge set concentrates near one") {
        Hypergraph h(10);
        for (Vertex i = 0; i + 1 < 10; ++i)
            for (Vertex j = i + 1; j < 10; ++j) h.add_two_edge(VertexPair(i, j));
        const double expect_q = (45.0 + hp.xi) / (45.0 + hp.xi + hp.zeta);
        double sum = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i)
            sum += resample_structure_probs(h, hp, rng).hypergraph().q;
        const double var = expect_q * (1 - expect_q) / (45.0 + hp.xi + hp.zeta + 1.0);
        CHECK(std::fabs(sum / n - expect_q) < 3.0 * std::sqrt(var / n));
    }
    SUBCASE("categorical conditionals") {
        CategoricalGraph g(8);
        g.add_weak_edge(VertexPair(0, 1));
        g.add_weak_edge(VertexPair(0, 2));
        g.add_strong_edge(VertexPair(3, 4));
        const double pairs = 28.0;
        const double a1 = 2.0 + hp.xi, b1 = pairs - 2.0 - 1.0 + hp.zeta;
        const double a2 = 1.0 + hp.xi, b2 = pairs - 1.0 + hp.zeta;
        double sum1 = 0.0, sum2 = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const auto probs = resample_structure_probs(g, hp, rng).categorical();
            sum1 += probs.q1;
            sum2 += probs.q2;
        }
        const double m1 = a1 / (a1 + b1), m2 = a2 / (a2 + b2);
        CHECK(std::fabs(sum1 / n - m1) < 3.0 * std::sqrt(m1 * (1 - m1) / ((a1 + b1 + 1) * n)));
        CHECK(std::fabs(sum2 / n - m2) < 3.0 * std::sqrt(m2 * (1 - m2) / ((a2 + b2 + 1) * n)));
    }
}

TEST_CASE("rate conditionals respect ordering and match quadrature") {
    const dist::Hyperparams hp;
    Rng rng(602);

    SUBCASE("empty stats reduce to the order-constrained prior") {
        SuffStats empty;
        RateParams mu{0.5, 2.0, 3.0};
        for (int i = 0; i < 2000; ++i) {
            mu = resample_rates(ModelKind::hypergraph, empty, mu, hp, rng);
            CHECK(mu.satisfies_order(ModelKind::hypergraph));
        }
    }
    SUBCASE("categorical ordering is enforced by the truncation chain") {
        SuffStats stats;
        stats.x_sum = {2, 40, 90};
        stats.pair_count = {10, 10, 10};
        RateParams mu{0.2, 4.0, 9.0};
        for (int i = 0; i < 2000; ++i) {
            mu = resample_rates(ModelKind::categorical, stats, mu, hp, rng);
            CHECK(mu.mu0 < mu.mu1);
            CHECK(mu.mu1 < mu.mu2);
        }
    }
    SUBCASE("conditional mean of mu1 matches quadrature on a fixed toy") {
        // Hypergraph model: mu1 | rest ~ TruncGamma_(mu0, inf).
        SuffStats stats;
        stats.x_sum = {0, 11, 9};
        stats.pair_count = {1, 1, 1};
        const RateParams current{0.5, 6.0, 8.0};
        const double shape = double(stats.x_sum[1]) + hp.alpha[1];
        const double rate = double(stats.pair_count[1]) + hp.beta[1];
        const double expect = oracle::trunc_gamma_moment(shape, rate, current.mu0,
                                                         dist::kInf, 1);
        double sum = 0.0, sum2 = 0.0;
        const int n = 50000;
        for (int i = 0; i < n; ++i) {
            const RateParams next = resample_rates(ModelKind::hypergraph, stats, current, hp, rng);
            sum += next.mu1;
            sum2 += next.mu1 * next.mu1;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(std::max(sum2 / n - mean * mean, 0.0));
        CHECK(std::fabs(mean - expect) < std::max(3.0 * sd / std::sqrt(double(n)), 0.01 * expect));
    }
}

TEST_CASE("parameter log prior") {
    const dist::Hyperparams hp;
    const StructureProbs probs(HypergraphProbs{0.1, 0.01});
    CHECK(std::isfinite(log_param_prior(ModelKind::hypergraph, RateParams{0.1, 2.0, 5.0}, probs, hp)));
    CHECK(log_param_prior(ModelKind::hypergraph, RateParams{2.0, 1.0, 5.0}, probs, hp) ==
          -std::numeric_limits<double>::infinity());
    // Hypergraph partial order allows mu2 < mu1.
    CHECK(std::isfinite(log_param_prior(ModelKind::hypergraph, RateParams{0.1, 5.0, 2.0}, probs, hp)));
    const StructureProbs cprobs(CategoricalProbs{0.1, 0.05});
    CHECK(log_param_prior(ModelKind::categorical, RateParams{0.1, 5.0, 2.0}, cprobs, hp) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("convergence rule") {
    McmcConfig cfg;
    cfg.window_w = 100;
    cfg.iter_min = 200;
    cfg.iter_max = 100000;

    SUBCASE("constant trace converges at the first eligible check") {
        ChainTrace trace;
        trace.loglik_history.assign(200, -50.0);
        CHECK(check_convergence(trace, cfg));
        trace.loglik_history.pop_back();
        CHECK_FALSE(check_convergence(trace, cfg));  // below 2W
    }
    SUBCASE("drifting trace with 5% window change fails at delta = 2%") {
        ChainTrace trace;
        // previous window mean -105, recent window mean about -99.75:
        // relative change 5%.
        for (int i = 0; i < 100; ++i) trace.loglik_history.push_back(-105.0);
        for (int i = 0; i < 100; ++i) trace.loglik_history.push_back(-99.75);
        CHECK_FALSE(check_convergence(trace, cfg));
        cfg.tol_delta = 0.06;
        CHECK(check_convergence(trace, cfg));
    }
    SUBCASE("any trace converges at iter_max") {
        cfg.tol_delta = 1e-12;
        cfg.iter_max = 300;
        ChainTrace trace;
        for (int i = 0; i < 300; ++i) trace.loglik_history.push_back(double(i));
        CHECK(check_convergence(trace, cfg));
    }
}

TEST_CASE("gibbs_iteration with zero structure proposals is exact conjugate Gibbs") {
    Rng rng(603);
    Hypergraph truth(6);
    truth.add_two_edge(VertexPair(0, 1));
    truth.add_three_edge(VertexTriple(2, 3, 4));
    const RateParams mu{0.2, 3.0, 7.0};
    const ObservationMatrix x = generate_observations(project_labels(truth), mu, rng);

    McmcConfig cfg = small_cfg();
    cfg.proposals_per_sweep = 0;
    const dist::Hyperparams hp;

    PosteriorSample state;
    state.structure = truth;
    state.mu = mu;
    state.probs = StructureProbs(HypergraphProbs{0.25, 0.1});

    // The structure must never change; q must follow its Beta conditional.
    const double a = double(truth.h1()) + hp.xi;
    const double b = double(n_choose_2(6)) - double(truth.h1()) + hp.zeta;
    double sum_q = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const PosteriorSample next = gibbs_iteration(state, x, cfg, hp, rng);
        CHECK(next.hypergraph() == truth);
        sum_q += next.probs.hypergraph().q;
    }
    const double m = a / (a + b);
    CHECK(std::fabs(sum_q / reps - m) <
          3.0 * std::sqrt(m * (1 - m) / ((a + b + 1) * reps)));
}

TEST_CASE("incremental log joint equals from-scratch recomputation") {
    Rng rng(604);
    Hypergraph truth(7);
    truth.add_two_edge(VertexPair(0, 1));
    truth.add_two_edge(VertexPair(2, 5));
    truth.add_three_edge(VertexTriple(1, 3, 4));
    const RateParams mu{0.1, 4.0, 8.0};
    const ObservationMatrix x = generate_observations(project_labels(truth), mu, rng);
    const dist::Hyperparams hp;
    McmcConfig cfg = small_cfg();

    const ObservationIndex obs(x);
    PosteriorSample init;
    init.structure = Hypergraph(7);
    init.mu = mu;
    init.probs = StructureProbs(HypergraphProbs{0.2, 0.05});
    GibbsChain chain(ModelKind::hypergraph, obs, init, cfg, hp);

    for (int sweep = 0; sweep < 200; ++sweep) {
        chain.refresh_parameters(rng);
        for (std::uint64_t i = 0; i < chain.proposals_per_sweep(); ++i)
            chain.structure_step(rng);
        const PosteriorSample snap = chain.snapshot();
        const double direct = oracle::log_hg_posterior(snap.hypergraph(), x, snap.mu,
                                                       snap.probs.hypergraph()) -
                              log_factorial_sum(x) +
                              log_param_prior(ModelKind::hypergraph, snap.mu, snap.probs, hp);
        CHECK(chain.log_joint() == doctest::Approx(direct).epsilon(1e-6));
        const double direct_ll =
            log_likelihood(x, project_labels(snap.hypergraph()), snap.mu);
        CHECK(chain.log_likelihood() == doctest::Approx(direct_ll).epsilon(1e-9));
    }
}

TEST_CASE("run_chain is reproducible and honors the sampling schedule") {
    Rng rng(605);
    Hypergraph truth(6);
    truth.add_three_edge(VertexTriple(0, 1, 2));
    const RateParams mu{0.1, 5.0, 9.0};
    const ObservationMatrix x = generate_observations(project_labels(truth), mu, rng);
    const dist::Hyperparams hp;
    const McmcConfig cfg = small_cfg();

    PosteriorSample init;
    init.structure = Hypergraph(6);
    init.mu = mu;
    init.probs = StructureProbs(HypergraphProbs{0.2, 0.05});

    const ChainTrace a = run_chain(ModelKind::hypergraph, x, init, cfg, hp, Rng(42));
    const ChainTrace b = run_chain(ModelKind::hypergraph, x, init, cfg, hp, Rng(42));
    CHECK(a.loglik_history == b.loglik_history);
    REQUIRE(a.samples.size() == cfg.n_samples);
    REQUIRE(b.samples.size() == cfg.n_samples);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].log_joint == b.samples[i].log_joint);
        CHECK(a.samples[i].hypergraph() == b.samples[i].hypergraph());
    }
    const ChainTrace c = run_chain(ModelKind::hypergraph, x, init, cfg, hp, Rng(43));
    CHECK(a.loglik_history != c.loglik_history);
}

TEST_CASE("run_inference keeps the best chain and matches run_chain for one chain") {
    Rng rng(606);
    Hypergraph truth(6);
    truth.add_two_edge(VertexPair(1, 4));
    truth.add_three_edge(VertexTriple(0, 2, 3));
    const RateParams mu{0.1, 5.0, 9.0};
    const ObservationMatrix x = generate_observations(project_labels(truth), mu, rng);
    const dist::Hyperparams hp;

    McmcConfig cfg = small_cfg();
    cfg.master_seed = 11;

    SUBCASE("n_chains = 1 reduces to run_chain") {
        cfg.n_chains = 1;
        const ChainTrace via_inference = run_inference(
            ModelKind::hypergraph, x, cfg, hp, InitMode::ground_truth, &truth, &mu);
        Rng init_rng(cfg.master_seed);
        const PosteriorSample init = make_initial_sample(
            ModelKind::hypergraph, x, InitMode::ground_truth, &truth, &mu, init_rng);
        const ChainTrace direct =
            run_chain(ModelKind::hypergraph, x, init, cfg, hp, Rng(cfg.master_seed));
        CHECK(via_inference.loglik_history == direct.loglik_history);
    }
    SUBCASE("selection rule picks the highest mean sample log-likelihood") {
        cfg.n_chains = 4;
        const ChainTrace best = run_inference(
            ModelKind::hypergraph, x, cfg, hp, InitMode::ground_truth, &truth, &mu);
        Rng init_rng(cfg.master_seed);
        const PosteriorSample init = make_initial_sample(
            ModelKind::hypergraph, x, InitMode::ground_truth, &truth, &mu, init_rng);
        for (int k = 0; k < 4; ++k) {
            const ChainTrace single =
                run_chain(ModelKind::hypergraph, x, init, cfg, hp, Rng(cfg.master_seed + k));
            CHECK(best.mean_sample_loglik() >= single.mean_sample_loglik() - 1e-12);
        }
    }
}

TEST_CASE("data-driven initialization produces a valid starting point") {
    Rng rng(607);
    Hypergraph truth(20);
    for (Vertex i = 0; i + 1 < 20; i += 2) truth.add_two_edge(VertexPair(i, i + 1));
    truth.add_three_edge(VertexTriple(0, 2, 4));
    const RateParams mu{0.05, 15.0, 30.0};
    const ObservationMatrix x = generate_observations(project_labels(truth), mu, rng);

    SUBCASE("hypergraph model") {
        const PosteriorSample init = make_initial_sample(
            ModelKind::hypergraph, x, InitMode::from_data, nullptr, nullptr, rng);
        const Hypergraph& h = init.hypergraph();
        CHECK(h.h2() == 0);
        std::size_t observed_pairs = 0;
        for (std::uint64_t idx = 0; idx < x.pair_count(); ++idx)
            observed_pairs += x.at_index(idx) > 0;
        CHECK(h.h1() == observed_pairs);
        CHECK(init.mu.satisfies_order(ModelKind::hypergraph));
        CHECK_NOTHROW(init.probs.validate());
    }
    SUBCASE("categorical model") {
        const PosteriorSample init = make_initial_sample(
            ModelKind::categorical, x, InitMode::from_data, nullptr, nullptr, rng);
        CHECK(init.graph().m2() == 0);
        CHECK(init.mu.satisfies_order(ModelKind::categorical));
    }
    SUBCASE("ground-truth initialization with reversed rates swaps categories") {
        const RateParams reversed{0.05, 30.0, 15.0};
        const PosteriorSample init = make_initial_sample(
            ModelKind::categorical, x, InitMode::ground_truth, &truth, &reversed, rng);
        CHECK(init.mu.satisfies_order(ModelKind::categorical));
        // Covered pairs (true type 2) become weak edges under the swap.
        const LabelMatrix lm = project_labels(truth);
        std::size_t covered = 0;
        for (auto l : lm.raw()) covered += l == 2;
        CHECK(init.graph().m1() == covered);
    }
}

TEST_CASE("estimators agree with exact enumeration at fixed parameters") {
    // Build a trace of fixed-parameter kernel snapshots, then compare the
    // estimator outputs against quantities computed from the exact
    // 1024-state posterior.
    const RateParams mu{0.1, 2.0, 4.5};
    const HypergraphProbs probs{0.25, 0.2};
    Hypergraph truth(4);
    truth.add_three_edge(VertexTriple(0, 1, 2));
    truth.add_two_edge(VertexPair(2, 3));
    Rng gen(610);
    const ObservationMatrix x = generate_observations(project_labels(truth), mu, gen);
    const std::vector<double> exact = oracle::enumerate_hypergraph_posterior(x, mu, probs);

    McmcConfig cfg;
    cfg.window_w = 10;
    cfg.iter_min = 10;
    cfg.iter_max = 100;
    const ObservationIndex obs(x);
    HypergraphSampler sampler(Hypergraph(4), mu, probs, obs, cfg);
    Rng rng(611);
    for (int t = 0; t < 20000; ++t) sampler.step(rng);

    ChainTrace trace;
    for (int s = 0; s < 4000; ++s) {
        for (int t = 0; t < 40; ++t) sampler.step(rng);
        PosteriorSample sample;
        sample.structure = sampler.to_hypergraph();
        sample.mu = mu;
        sample.probs = StructureProbs(probs);
        sample.log_joint = oracle::log_hg_posterior(sample.hypergraph(), x, mu, probs);
        sample.log_likelihood = sample.log_joint;
        trace.samples.push_back(std::move(sample));
    }

    // Edge-wise marginals against exact marginals.
    double max_marginal_err = 0.0;
    for (std::uint32_t idx = 0; idx < 6; ++idx) {
        double exact_marginal = 0.0;
        for (std::uint32_t s = 0; s < 1024; ++s)
            if (s & (1u << idx)) exact_marginal += exact[s];
        double freq = 0.0;
        for (const auto& smp : trace.samples)
            freq += smp.hypergraph().has_two_edge(pair_from_index(idx, 4));
        freq /= double(trace.samples.size());
        max_marginal_err = std::max(max_marginal_err, std::fabs(freq - exact_marginal));
    }
    for (std::uint32_t t3 = 0; t3 < 4; ++t3) {
        double exact_marginal = 0.0;
        for (std::uint32_t s = 0; s < 1024; ++s)
            if (s & (1u << (6 + t3))) exact_marginal += exact[s];
        const Hypergraph probe = oracle::hypergraph_from_state_index(1u << (6 + t3));
        const VertexTriple trip = *probe.three_edges().begin();
        double freq = 0.0;
        for (const auto& smp : trace.samples) freq += smp.hypergraph().has_three_edge(trip);
        freq /= double(trace.samples.size());
        max_marginal_err = std::max(max_marginal_err, std::fabs(freq - exact_marginal));
    }
    CHECK(max_marginal_err < 0.02);

    // MAP estimate vs the exact argmax state.
    const std::uint32_t exact_argmax = std::uint32_t(
        std::max_element(exact.begin(), exact.end()) - exact.begin());
    CHECK(oracle::hypergraph_state_index(map_estimate(trace).hypergraph()) == exact_argmax);

    // Maximum-marginal labels vs exact label marginals (away from ties).
    Rng tie_rng(612);
    const LabelMatrix mm = marginal_label_estimate(trace, tie_rng);
    for (std::uint32_t idx = 0; idx < 6; ++idx) {
        double label_prob[3] = {0, 0, 0};
        for (std::uint32_t s = 0; s < 1024; ++s) {
            const LabelMatrix lm =
                project_labels(oracle::hypergraph_from_state_index(s));
            label_prob[lm.at_index(idx)] += exact[s];
        }
        const int exact_best = int(std::max_element(label_prob, label_prob + 3) - label_prob);
        const double second = [&]() {
            double best = -1, snd = -1;
            for (double p : label_prob) {
                if (p > best) { snd = best; best = p; }
                else if (p > snd) snd = p;
            }
            return snd;
        }();
        if (label_prob[exact_best] - second > 0.05)  // clear winner, no tie risk
            CHECK(mm.at_index(idx) == exact_best);
    }
}

TEST_CASE("posterior credible intervals cover the generating rates") {
    // Self-consistency at the model's own prior: drawing (phi, mu, H, X)
    // from the generative model makes the 95% credible intervals calibrated
    // by construction, up to Monte Carlo error.
    const Vertex n = 16;
    const dist::Hyperparams hp;

    McmcConfig cfg;
    cfg.window_w = 500;
    cfg.iter_min = 5000;
    cfg.iter_max = 60000;
    cfg.n_samples = 100;
    cfg.sample_stride = 20;
    cfg.n_chains = 1;

    int covered = 0, total = 0;
    const int reps = 50;
    for (int rep = 0; rep < reps; ++rep) {
        Rng gen(900 + rep);
        const double q = dist::sample_beta(hp.xi, hp.zeta, gen);
        const double p = dist::sample_beta(hp.xi, hp.zeta, gen);
        RateParams mu;
        do {
            mu.mu0 = dist::sample_gamma(hp.alpha[0], hp.beta[0], gen);
            mu.mu1 = dist::sample_gamma(hp.alpha[1], hp.beta[1], gen);
            mu.mu2 = dist::sample_gamma(hp.alpha[2], hp.beta[2], gen);
        } while (!mu.satisfies_order(ModelKind::hypergraph));
        const Hypergraph truth = random_hypergraph(n, p, q, gen);
        const ObservationMatrix x = generate_observations(project_labels(truth), mu, gen);

        cfg.master_seed = 7000 + rep;
        const ChainTrace trace = run_inference(ModelKind::hypergraph, x, cfg, hp,
                                               InitMode::ground_truth, &truth, &mu);
        REQUIRE(!trace.samples.empty());
        const double truths[3] = {mu.mu0, mu.mu1, mu.mu2};
        for (int k = 0; k < 3; ++k) {
            std::vector<double> vals;
            for (const auto& s : trace.samples)
                vals.push_back(k == 0 ? s.mu.mu0 : (k == 1 ? s.mu.mu1 : s.mu.mu2));
            std::sort(vals.begin(), vals.end());
            const double lo = vals[std::size_t(0.025 * double(vals.size() - 1))];
            const double hi = vals[std::size_t(std::ceil(0.975 * double(vals.size() - 1)))];
            covered += (truths[k] >= lo && truths[k] <= hi);
            ++total;
        }
    }
    CHECK(double(covered) / double(total) >= 0.90);
}
