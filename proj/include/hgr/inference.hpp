#pragma once

#include <optional>

#include "hgr/distributions.hpp"
#include "hgr/graph_sampler.hpp"
#include "hgr/hypergraph_sampler.hpp"
#include "hgr/mcmc.hpp"
#include "hgr/observation_index.hpp"
#include "hgr/types.hpp"

namespace hgr {

enum class InitMode { ground_truth, from_data };

// Beta full conditionals of the structure probabilities.
HypergraphProbs resample_hypergraph_probs(std::int64_t h1, std::int64_t h2, Vertex n,
                                          const dist::Hyperparams& hp, Rng& rng);
CategoricalProbs resample_categorical_probs(std::int64_t m1, std::int64_t m2, Vertex n,
                                            const dist::Hyperparams& hp, Rng& rng);
StructureProbs resample_structure_probs(const Hypergraph& h, const dist::Hyperparams& hp,
                                        Rng& rng);
StructureProbs resample_structure_probs(const CategoricalGraph& g, const dist::Hyperparams& hp,
                                        Rng& rng);

// Truncated-gamma full conditionals of the rates, resampled sequentially
// (mu0, mu1, mu2) with freshly updated ordering bounds.
RateParams resample_rates(ModelKind model, const SuffStats& stats, const RateParams& current,
                          const dist::Hyperparams& hp, Rng& rng);

// Log prior density of (mu, phi): independent gammas restricted by the
// model's ordering constraints plus Beta priors on the probabilities.
double log_param_prior(ModelKind model, const RateParams& mu, const StructureProbs& probs,
                       const dist::Hyperparams& hp);

// Stabilization rule on the per-proposal log-likelihood history: relative
// change between the last two windows of W entries below tol_delta. Requires
// at least max(2W, iter_min) entries; unconditionally true at iter_max.
bool check_convergence(const ChainTrace& trace, const McmcConfig& cfg);

// Full Gibbs state for one chain: parameters plus the structure kernel.
class GibbsChain {
  public:
    GibbsChain(ModelKind model, const ObservationIndex& obs, const PosteriorSample& init,
               const McmcConfig& cfg, const dist::Hyperparams& hp);

    void refresh_parameters(Rng& rng);
    bool structure_step(Rng& rng);  // one MH proposal; true if accepted

    std::uint64_t proposals_per_sweep() const { return sweep_; }
    double log_likelihood() const;  // full, including the factorial constant
    double log_joint() const;       // unnormalized posterior numerator, factorials dropped
    PosteriorSample snapshot() const;

    ModelKind model() const { return model_; }
    const SuffStats& stats() const;

  private:
    ModelKind model_;
    const ObservationIndex& obs_;
    McmcConfig cfg_;
    dist::Hyperparams hp_;
    std::uint64_t sweep_;
    std::optional<HypergraphSampler> hg_;
    std::optional<GraphSampler> g_;
    RateParams mu_;
    StructureProbs probs_;
};

// One spec-level Gibbs iteration on a posterior sample: parameter refresh
// followed by a sweep of structure proposals.
PosteriorSample gibbs_iteration(const PosteriorSample& state, const ObservationMatrix& x,
                                const McmcConfig& cfg, const dist::Hyperparams& hp, Rng& rng);

// Initial sample per the two supported modes. `truth` must be provided for
// ground-truth initialization (for the categorical model it enters through
// its label projection); `true_mu` supplies the generating rates.
PosteriorSample make_initial_sample(ModelKind model, const ObservationMatrix& x, InitMode mode,
                                    const Hypergraph* truth, const RateParams* true_mu,
                                    Rng& rng);

ChainTrace run_chain(ModelKind model, const ObservationMatrix& x, const PosteriorSample& init,
                     const McmcConfig& cfg, const dist::Hyperparams& hp, Rng rng);
ChainTrace run_chain(ModelKind model, const ObservationIndex& obs, const PosteriorSample& init,
                     const McmcConfig& cfg, const dist::Hyperparams& hp, Rng rng);

// n_chains parallel chains from seeds master_seed + k; returns the chain with
// the highest mean retained-sample log-likelihood.
ChainTrace run_inference(ModelKind model, const ObservationMatrix& x, const McmcConfig& cfg,
                         const dist::Hyperparams& hp, InitMode mode,
                         const Hypergraph* truth = nullptr, const RateParams* true_mu = nullptr,
                         int workers = 0);

}  // namespace hgr
