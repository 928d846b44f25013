#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hgr/indexed_set.hpp"
#include "hgr/likelihood.hpp"
#include "hgr/mcmc.hpp"
#include "hgr/observation_index.hpp"
#include "hgr/types.hpp"

namespace hgr {

enum class HgMove { add2, rem2, add3, rem3, add_hidden, rem_hidden };

struct HgProposal {
    HgMove kind = HgMove::add2;
    std::uint32_t pair = 0;               // add2 / rem2
    VertexTriple triple;                  // add3 / rem3
    std::vector<std::uint32_t> hidden;    // add_hidden / rem_hidden (pair indices)
    bool auto_rejected = false;           // degenerate or already-present 3-edge
    double log_q_forward = 0.0;
    double log_q_reverse = 0.0;
    double log_pi_delta = 0.0;
};

// Metropolis-Hastings kernel over hypergraphs at fixed parameters, with the
// six-move proposal mix: single 2-edge and 3-edge additions/removals plus
// block moves on hidden 2-edges. All aggregates (labels via cover counts,
// sufficient statistics, hidden-edge sets, proposal weight sums) are
// maintained incrementally; a full rebuild is only used by tests.
class HypergraphSampler {
  public:
    HypergraphSampler(const Hypergraph& h, const RateParams& mu, const HypergraphProbs& probs,
                      const ObservationIndex& obs, const McmcConfig& cfg);

    void set_params(const RateParams& mu, const HypergraphProbs& probs);

    HgProposal propose(Rng& rng);
    bool accept_test(const HgProposal& p, Rng& rng) const;
    void apply(const HgProposal& p);
    bool step(Rng& rng);

    const SuffStats& stats() const { return stats_; }
    std::int64_t h1() const { return h1_; }
    std::int64_t h2() const { return h2_; }
    std::uint32_t hidden_existing_count() const { return c0_.size(); }
    std::uint32_t hidden_absent_count() const { return c1_.size(); }
    Label label(std::uint32_t pair_idx) const {
        return cover_[pair_idx] > 0 ? 2 : (in_e_[pair_idx] ? 1 : 0);
    }
    const RateParams& mu() const { return mu_; }
    const HypergraphProbs& probs() const { return probs_; }

    double log_structure_prior() const;

    Hypergraph to_hypergraph() const;

  private:
    friend struct HypergraphSamplerInspector;

    struct SetDelta { std::int32_t d_c0 = 0, d_c1 = 0; };

    double log_redraw_norm(std::uint32_t c0_size, std::uint32_t c1_size) const;
    double log_dir_prob(bool add, std::int64_t count, std::int64_t capacity) const;
    std::uint32_t sample_absent_pair(Rng& rng);
    std::uint32_t sample_block_size(double chi, std::uint32_t cap, Rng& rng) const;
    double log_hidden_set_prob(std::uint32_t m, std::uint32_t set_size, double chi) const;
    SetDelta hidden_set_delta(const HgProposal& p) const;
    double pair_loglik_delta(std::uint32_t pair_idx, Label from, Label to) const;

    static std::uint64_t triple_key(const VertexTriple& t) {
        return (std::uint64_t(t.a) << 42) | (std::uint64_t(t.b) << 21) | t.c;
    }

    const ObservationIndex& obs_;
    double eta_, nu2_, nu3_, chi0_, chi1_;
    std::uint64_t triple_capacity_ = 0;

    std::vector<std::uint8_t> in_e_;
    std::vector<std::uint32_t> cover_;  // number of 3-edges covering each pair
    IndexedSet e_set_;                  // 2-edges, by pair index
    IndexedSet c0_;                     // existing hidden 2-edges
    IndexedSet c1_;                     // covered pairs without a 2-edge
    std::vector<VertexTriple> triples_;
    std::unordered_map<std::uint64_t, std::uint32_t> triple_pos_;
    std::int64_t h1_ = 0, h2_ = 0;
    std::int64_t sum_w_absent_ = 0;  // sum of (x+1) over pairs without a 2-edge
    SuffStats stats_;

    RateParams mu_;
    HypergraphProbs probs_;
    double log_mu_[3] = {0, 0, 0};
    double log_q_ = 0, log_1mq_ = 0, log_p_ = 0, log_1mp_ = 0;
};

// Single proposal convenience wrapper around a freshly built sampler.
Hypergraph mh_step_hypergraph(const Hypergraph& h, const RateParams& mu,
                              const HypergraphProbs& probs, const ObservationMatrix& x,
                              const McmcConfig& cfg, Rng& rng);

}  // namespace hgr
