#pragma once

#include <cstdint>
#include <vector>

#include "hgr/indexed_set.hpp"
#include "hgr/likelihood.hpp"
#include "hgr/mcmc.hpp"
#include "hgr/observation_index.hpp"
#include "hgr/types.hpp"

namespace hgr {

// One proposed label move for the categorical-edge model.
struct GraphProposal {
    bool increment = true;
    std::uint32_t pair = 0;
    Label from = 0, to = 0;
    double log_q_forward = 0.0;
    double log_q_reverse = 0.0;
    double log_pi_delta = 0.0;
};

// Metropolis-Hastings kernel over categorical-edge graphs at fixed
// parameters. Keeps labels, sufficient statistics and proposal aggregates
// incrementally; one instance belongs to one chain.
class GraphSampler {
  public:
    GraphSampler(const CategoricalGraph& g, const RateParams& mu, const CategoricalProbs& probs,
                 const ObservationIndex& obs, const McmcConfig& cfg);

    void set_params(const RateParams& mu, const CategoricalProbs& probs);

    GraphProposal propose(Rng& rng);
    bool accept_test(const GraphProposal& p, Rng& rng) const;
    void apply(const GraphProposal& p);
    // Propose-and-maybe-apply; returns whether the state changed.
    bool step(Rng& rng);

    const SuffStats& stats() const { return stats_; }
    std::int64_t m1() const { return m1_; }
    std::int64_t m2() const { return m2_; }
    Label label(std::uint32_t pair_idx) const { return labels_[pair_idx]; }
    const std::vector<Label>& labels() const { return labels_; }
    const RateParams& mu() const { return mu_; }
    const CategoricalProbs& probs() const { return probs_; }

    // log P(G | phi): the structure prior at the current counts.
    double log_structure_prior() const;

    CategoricalGraph to_graph() const;

  private:
    double log_dir_prob_increment(std::int64_t m2, std::int64_t nonzero) const;
    double log_dir_prob_decrement(std::int64_t m2, std::int64_t nonzero) const;
    std::uint32_t sample_increment_pair(Rng& rng);

    const ObservationIndex& obs_;
    double eta_;

    std::vector<Label> labels_;
    SuffStats stats_;
    std::int64_t m1_ = 0, m2_ = 0;
    std::int64_t sum_w_lt2_ = 0;  // sum of (x+1) over pairs with label < 2
    IndexedSet nonzero_;          // pairs with label > 0

    RateParams mu_;
    CategoricalProbs probs_;
    double log_mu_[3] = {0, 0, 0};
    double log_q1_ = 0, log_1mq1_ = 0, log_q2_ = 0, log_1mq2_ = 0;
};

// Single proposal convenience wrapper around a freshly built sampler.
CategoricalGraph mh_step_graph(const CategoricalGraph& g, const RateParams& mu,
                               const CategoricalProbs& probs, const ObservationMatrix& x,
                               const McmcConfig& cfg, Rng& rng);

}  // namespace hgr
