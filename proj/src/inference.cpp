#include "hgr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hgr/labels.hpp"
#include "hgr/mixture_em.hpp"
#include "hgr/parallel.hpp"

namespace hgr {

namespace {
double clamp_prob(double p) { return std::clamp(p, 1e-9, 1.0 - 1e-9); }
}  // namespace

HypergraphProbs resample_hypergraph_probs(std::int64_t h1, std::int64_t h2, Vertex n,
                                          const dist::Hyperparams& hp, Rng& rng) {
    const double pairs = double(n_choose_2(n));
    const double triples = double(n_choose_3(n));
    HypergraphProbs out;
    out.q = dist::sample_beta(double(h1) + hp.xi, pairs - double(h1) + hp.zeta, rng);
    out.p = dist::sample_beta(double(h2) + hp.xi, triples - double(h2) + hp.zeta, rng);
    return out;
}

CategoricalProbs resample_categorical_probs(std::int64_t m1, std::int64_t m2, Vertex n,
                                            const dist::Hyperparams& hp, Rng& rng) {
    const double pairs = double(n_choose_2(n));
    CategoricalProbs out;
    out.q1 = dist::sample_beta(double(m1) + hp.xi,
                               pairs - double(m1) - double(m2) + hp.zeta, rng);
    out.q2 = dist::sample_beta(double(m2) + hp.xi, pairs - double(m2) + hp.zeta, rng);
    return out;
}

StructureProbs resample_structure_probs(const Hypergraph& h, const dist::Hyperparams& hp,
                                        Rng& rng) {
    return StructureProbs(
        resample_hypergraph_probs(std::int64_t(h.h1()), std::int64_t(h.h2()), h.n(), hp, rng));
}

StructureProbs resample_structure_probs(const CategoricalGraph& g, const dist::Hyperparams& hp,
                                        Rng& rng) {
    return StructureProbs(
        resample_categorical_probs(std::int64_t(g.m1()), std::int64_t(g.m2()), g.n(), hp, rng));
}

RateParams resample_rates(ModelKind model, const SuffStats& stats, const RateParams& current,
                          const dist::Hyperparams& hp, Rng& rng) {
    current.require_order(model);
    RateParams next = current;
    const auto shape = [&](int k) { return double(stats.x_sum[k]) + hp.alpha[k]; };
    const auto rate = [&](int k) { return double(stats.pair_count[k]) + hp.beta[k]; };

    if (model == ModelKind::hypergraph) {
        next.mu0 = dist::sample_truncated_gamma(
            shape(0), rate(0), dist::TruncInterval(0.0, std::min(next.mu1, next.mu2)), rng);
        next.mu1 = dist::sample_truncated_gamma(shape(1), rate(1),
                                                dist::TruncInterval(next.mu0, dist::kInf), rng);
        next.mu2 = dist::sample_truncated_gamma(shape(2), rate(2),
                                                dist::TruncInterval(next.mu0, dist::kInf), rng);
    } else {
        next.mu0 = dist::sample_truncated_gamma(shape(0), rate(0),
                                                dist::TruncInterval(0.0, next.mu1), rng);
        next.mu1 = dist::sample_truncated_gamma(shape(1), rate(1),
                                                dist::TruncInterval(next.mu0, next.mu2), rng);
        next.mu2 = dist::sample_truncated_gamma(shape(2), rate(2),
                                                dist::TruncInterval(next.mu1, dist::kInf), rng);
    }
    next.require_order(model);
    return next;
}

double log_param_prior(ModelKind model, const RateParams& mu, const StructureProbs& probs,
                       const dist::Hyperparams& hp) {
    if (!mu.satisfies_order(model)) return -std::numeric_limits<double>::infinity();
    double lp = dist::log_gamma_pdf(mu.mu0, hp.alpha[0], hp.beta[0]) +
                dist::log_gamma_pdf(mu.mu1, hp.alpha[1], hp.beta[1]) +
                dist::log_gamma_pdf(mu.mu2, hp.alpha[2], hp.beta[2]);
    if (probs.kind() != model) throw std::invalid_argument("structure-prob variant mismatch");
    if (model == ModelKind::hypergraph) {
        lp += dist::log_beta_pdf(probs.hypergraph().q, hp.xi, hp.zeta);
        lp += dist::log_beta_pdf(probs.hypergraph().p, hp.xi, hp.zeta);
    } else {
        lp += dist::log_beta_pdf(probs.categorical().q1, hp.xi, hp.zeta);
        lp += dist::log_beta_pdf(probs.categorical().q2, hp.xi, hp.zeta);
    }
    return lp;
}

bool check_convergence(const ChainTrace& trace, const McmcConfig& cfg) {
    const auto& h = trace.loglik_history;
    const std::uint64_t len = h.size();
    if (len >= cfg.iter_max) return true;
    if (len < 2 * cfg.window_w || len < cfg.iter_min) return false;
    double recent = 0.0, previous = 0.0;
    for (std::uint64_t i = len - cfg.window_w; i < len; ++i) recent += h[i];
    for (std::uint64_t i = len - 2 * cfg.window_w; i < len - cfg.window_w; ++i) previous += h[i];
    recent /= double(cfg.window_w);
    previous /= double(cfg.window_w);
    return std::fabs(recent - previous) < cfg.tol_delta * std::fabs(previous);
}

GibbsChain::GibbsChain(ModelKind model, const ObservationIndex& obs,
                       const PosteriorSample& init, const McmcConfig& cfg,
                       const dist::Hyperparams& hp)
    : model_(model), obs_(obs), cfg_(cfg), hp_(hp), mu_(init.mu), probs_(init.probs) {
    cfg.validate();
    hp.validate();
    if (init.kind() != model || init.probs.kind() != model)
        throw std::invalid_argument("initial sample does not match the requested model");
    sweep_ = cfg.proposals_per_sweep >= 0 ? std::uint64_t(cfg.proposals_per_sweep)
                                          : n_choose_2(obs.n());
    if (model_ == ModelKind::hypergraph)
        hg_.emplace(init.hypergraph(), mu_, probs_.hypergraph(), obs_, cfg_);
    else
        g_.emplace(init.graph(), mu_, probs_.categorical(), obs_, cfg_);
}

const SuffStats& GibbsChain::stats() const {
    return model_ == ModelKind::hypergraph ? hg_->stats() : g_->stats();
}

void GibbsChain::refresh_parameters(Rng& rng) {
    if (model_ == ModelKind::hypergraph) {
        probs_ = StructureProbs(
            resample_hypergraph_probs(hg_->h1(), hg_->h2(), obs_.n(), hp_, rng));
        mu_ = resample_rates(model_, hg_->stats(), mu_, hp_, rng);
        hg_->set_params(mu_, probs_.hypergraph());
    } else {
        probs_ = StructureProbs(
            resample_categorical_probs(g_->m1(), g_->m2(), obs_.n(), hp_, rng));
        mu_ = resample_rates(model_, g_->stats(), mu_, hp_, rng);
        g_->set_params(mu_, probs_.categorical());
    }
}

bool GibbsChain::structure_step(Rng& rng) {
    return model_ == ModelKind::hypergraph ? hg_->step(rng) : g_->step(rng);
}

double GibbsChain::log_likelihood() const {
    return log_likelihood_from_stats(stats(), mu_) + obs_.log_factorial_const();
}

double GibbsChain::log_joint() const {
    const double structure_prior = model_ == ModelKind::hypergraph
                                       ? hg_->log_structure_prior()
                                       : g_->log_structure_prior();
    return log_likelihood_from_stats(stats(), mu_) + structure_prior +
           log_param_prior(model_, mu_, probs_, hp_);
}

PosteriorSample GibbsChain::snapshot() const {
    PosteriorSample s;
    if (model_ == ModelKind::hypergraph)
        s.structure = hg_->to_hypergraph();
    else
        s.structure = g_->to_graph();
    s.mu = mu_;
    s.probs = probs_;
    s.log_joint = log_joint();
    s.log_likelihood = log_likelihood();
    return s;
}

PosteriorSample gibbs_iteration(const PosteriorSample& state, const ObservationMatrix& x,
                                const McmcConfig& cfg, const dist::Hyperparams& hp, Rng& rng) {
    ObservationIndex obs(x);
    GibbsChain chain(state.kind(), obs, state, cfg, hp);
    chain.refresh_parameters(rng);
    for (std::uint64_t i = 0; i < chain.proposals_per_sweep(); ++i) chain.structure_step(rng);
    return chain.snapshot();
}

PosteriorSample make_initial_sample(ModelKind model, const ObservationMatrix& x, InitMode mode,
                                    const Hypergraph* truth, const RateParams* true_mu,
                                    Rng& rng) {
    const Vertex n = x.n();
    const double pairs = double(n_choose_2(n));
    PosteriorSample init;

    if (mode == InitMode::ground_truth) {
        if (truth == nullptr || true_mu == nullptr)
            throw std::invalid_argument("ground-truth initialization needs a structure and rates");
        if (truth->n() != n) throw std::invalid_argument("truth/observation dimension mismatch");
        if (model == ModelKind::hypergraph) {
            true_mu->require_order(model);
            init.structure = *truth;
            init.mu = *true_mu;
            HypergraphProbs hp0;
            hp0.q = clamp_prob(double(truth->h1()) / pairs);
            hp0.p = clamp_prob(double(truth->h2()) / std::max(double(n_choose_3(n)), 1.0));
            init.probs = StructureProbs(hp0);
        } else {
            // The categorical chain starts from the projected labels. When the
            // generating rates are not in weak < strong order, the categories
            // attach to the rate order instead (weak = smaller mean).
            const LabelMatrix lm = project_labels(*truth);
            const bool swap = true_mu->mu1 > true_mu->mu2;
            CategoricalGraph g(n);
            for (Vertex i = 0; i + 1 < n; ++i)
                for (Vertex j = i + 1; j < n; ++j) {
                    Label l = lm.at(i, j);
                    if (swap && l != 0) l = Label(3 - l);
                    if (l == 1) g.add_weak_edge(VertexPair(i, j));
                    else if (l == 2) g.add_strong_edge(VertexPair(i, j));
                }
            RateParams mu = *true_mu;
            if (swap) std::swap(mu.mu1, mu.mu2);
            mu.require_order(model);
            CategoricalProbs cp;
            cp.q2 = clamp_prob(double(g.m2()) / pairs);
            cp.q1 = clamp_prob(double(g.m1()) / std::max(pairs - double(g.m2()), 1.0));
            init.structure = std::move(g);
            init.mu = mu;
            init.probs = StructureProbs(cp);
        }
        return init;
    }

    // Data-driven initialization: edges wherever something was observed, no
    // higher-order structure, parameters from the Poisson-mixture MLE.
    const PoissonMixture mix = poisson_mixture_em(x, rng);
    RateParams mu{mix.rates[0], mix.rates[1], mix.rates[2]};
    const double coverage = std::clamp(mix.weights[2], 1e-9, 1.0 - 1e-9);

    if (model == ModelKind::hypergraph) {
        Hypergraph h(n);
        for (Vertex i = 0; i + 1 < n; ++i)
            for (Vertex j = i + 1; j < n; ++j)
                if (x.at(i, j) > 0) h.add_two_edge(VertexPair(i, j));
        HypergraphProbs hp0;
        hp0.q = clamp_prob(mix.weights[1]);
        hp0.p = clamp_prob(n > 2 ? 1.0 - std::pow(1.0 - coverage, 1.0 / double(n - 2)) : coverage);
        init.structure = std::move(h);
        init.probs = StructureProbs(hp0);
    } else {
        CategoricalGraph g(n);
        for (Vertex i = 0; i + 1 < n; ++i)
            for (Vertex j = i + 1; j < n; ++j)
                if (x.at(i, j) > 0) g.add_weak_edge(VertexPair(i, j));
        CategoricalProbs cp;
        cp.q2 = clamp_prob(coverage);
        cp.q1 = clamp_prob(mix.weights[1] / std::max(1.0 - coverage, 1e-9));
        init.structure = std::move(g);
        init.probs = StructureProbs(cp);
    }
    init.mu = mu;
    return init;
}

ChainTrace run_chain(ModelKind model, const ObservationMatrix& x, const PosteriorSample& init,
                     const McmcConfig& cfg, const dist::Hyperparams& hp, Rng rng) {
    ObservationIndex obs(x);
    return run_chain(model, obs, init, cfg, hp, rng);
}

ChainTrace run_chain(ModelKind model, const ObservationIndex& obs, const PosteriorSample& init,
                     const McmcConfig& cfg, const dist::Hyperparams& hp, Rng rng) {
    GibbsChain chain(model, obs, init, cfg, hp);
    ChainTrace trace;
    trace.loglik_history.reserve(std::min<std::uint64_t>(cfg.iter_max + 1, 1u << 22));

    const std::uint64_t sweep = std::max<std::uint64_t>(chain.proposals_per_sweep(), 1);
    const std::uint64_t eligible = std::max(2 * cfg.window_w, cfg.iter_min);

    // Burn-in: record the log-likelihood after every proposal, watch the
    // two-window stabilization rule. The parameter refresh runs after each
    // completed sweep, so the first sweep works at the initialized
    // parameters; refreshing first would collapse the covered-class rate to
    // its prior before any 3-edge exists to anchor it (the hypergraph
    // ordering leaves mu2 unbounded above).
    double recent_sum = 0.0, previous_sum = 0.0;  // rolling window sums
    std::uint64_t t = 0;
    bool converged = false;
    while (t < cfg.iter_max) {
        if (t != 0 && t % sweep == 0) chain.refresh_parameters(rng);
        trace.accepted_moves += chain.structure_step(rng) ? 1 : 0;
        ++t;
        const double ll = chain.log_likelihood();
        trace.loglik_history.push_back(ll);
        // Maintain sums of the last W and the W before that.
        const auto& h = trace.loglik_history;
        recent_sum += ll;
        if (h.size() > cfg.window_w) {
            const double leaving = h[h.size() - 1 - cfg.window_w];
            recent_sum -= leaving;
            previous_sum += leaving;
            if (h.size() > 2 * cfg.window_w)
                previous_sum -= h[h.size() - 1 - 2 * cfg.window_w];
        }
        if (t >= eligible) {
            const double recent = recent_sum / double(cfg.window_w);
            const double previous = previous_sum / double(cfg.window_w);
            if (std::fabs(recent - previous) < cfg.tol_delta * std::fabs(previous)) {
                converged = true;
                break;
            }
        }
    }
    trace.total_proposals = t;
    trace.converged = converged;
    if (converged) trace.converged_at = t;

    // Sampling phase: per-sweep recording only.
    for (std::uint64_t s = 0; s < cfg.n_samples; ++s) {
        for (std::uint64_t k = 0; k < cfg.sample_stride; ++k) {
            chain.refresh_parameters(rng);
            for (std::uint64_t i = 0; i < sweep; ++i)
                trace.accepted_moves += chain.structure_step(rng) ? 1 : 0;
            trace.total_proposals += sweep;
            trace.loglik_history.push_back(chain.log_likelihood());
        }
        chain.refresh_parameters(rng);
        trace.samples.push_back(chain.snapshot());
    }
    return trace;
}

ChainTrace run_inference(ModelKind model, const ObservationMatrix& x, const McmcConfig& cfg,
                         const dist::Hyperparams& hp, InitMode mode, const Hypergraph* truth,
                         const RateParams* true_mu, int workers) {
    cfg.validate();
    ObservationIndex obs(x);
    Rng init_rng(cfg.master_seed);
    const PosteriorSample init = make_initial_sample(model, x, mode, truth, true_mu, init_rng);

    std::vector<ChainTrace> traces(cfg.n_chains);
    const int nw = resolve_workers(std::min(workers > 0 ? workers : cfg.n_chains, cfg.n_chains));
#pragma omp parallel for schedule(dynamic) num_threads(nw)
    for (int k = 0; k < cfg.n_chains; ++k) {
        traces[k] = run_chain(model, obs, init, cfg, hp, Rng(cfg.master_seed + k));
        traces[k].seed = cfg.master_seed + k;
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < traces.size(); ++k)
        if (traces[k].mean_sample_loglik() > traces[best].mean_sample_loglik()) best = k;
    return std::move(traces[best]);
}

}  // namespace hgr
