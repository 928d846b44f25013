#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hgr/types.hpp"

namespace hgr {

// Sampler settings. Iteration quantities (window_w, iter_min, iter_max,
// converged_at) count individual structure proposals, not sweeps; one sweep
// performs `proposals_per_sweep` of them (C(n,2) when left at the automatic
// value) after a full parameter refresh.
struct McmcConfig {
    double eta = 0.5;           // probability of an increment/add move
    double nu2 = 0.4999;        // 2-edge move-class probability
    double nu3 = 0.4999;        // 3-edge move-class probability
    double chi0 = 0.99;         // geometric parameter, hidden-2-edge removals
    double chi1 = 0.01;         // geometric parameter, hidden-2-edge additions
    std::uint64_t window_w = 20000;
    double tol_delta = 0.02;
    std::uint64_t iter_min = 200000;
    std::uint64_t iter_max = 1000000;
    int n_chains = 4;
    std::uint64_t sample_stride = 100;  // sweeps between retained samples
    std::uint64_t n_samples = 100;
    std::uint64_t master_seed = 0;
    std::int64_t proposals_per_sweep = -1;  // -1: C(n,2)

    void validate() const {
        if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0,1)");
        if (!(nu2 > 0.0 && nu3 > 0.0 && nu2 + nu3 < 1.0))
            throw std::invalid_argument("nu2, nu3 must be positive with nu2 + nu3 < 1");
        if (!(chi0 > 0.0 && chi0 < 1.0 && chi1 > 0.0 && chi1 < 1.0))
            throw std::invalid_argument("chi parameters must lie in (0,1)");
        if (window_w == 0 || iter_min == 0 || iter_max == 0 || iter_min > iter_max)
            throw std::invalid_argument("iteration bounds must be positive with iter_min <= iter_max");
        if (n_chains <= 0) throw std::invalid_argument("n_chains must be positive");
        if (sample_stride == 0 || n_samples == 0)
            throw std::invalid_argument("sample_stride and n_samples must be positive");
    }
    friend bool operator==(const McmcConfig&, const McmcConfig&) = default;
};

// One retained draw from the joint posterior.
struct PosteriorSample {
    std::variant<Hypergraph, CategoricalGraph> structure;
    RateParams mu;
    StructureProbs probs;
    double log_joint = 0.0;       // unnormalized log posterior (factorials dropped)
    double log_likelihood = 0.0;  // full data log-likelihood

    ModelKind kind() const {
        return std::holds_alternative<Hypergraph>(structure) ? ModelKind::hypergraph
                                                             : ModelKind::categorical;
    }
    const Hypergraph& hypergraph() const { return std::get<Hypergraph>(structure); }
    const CategoricalGraph& graph() const { return std::get<CategoricalGraph>(structure); }
};

struct ChainTrace {
    // Per-proposal log-likelihood until convergence; per-sweep afterwards.
    std::vector<double> loglik_history;
    std::vector<PosteriorSample> samples;
    std::optional<std::uint64_t> converged_at;  // proposal index
    bool converged = false;
    std::uint64_t seed = 0;
    std::uint64_t accepted_moves = 0;
    std::uint64_t total_proposals = 0;

    double mean_sample_loglik() const {
        if (samples.empty()) return -std::numeric_limits<double>::infinity();
        double s = 0.0;
        for (const auto& smp : samples) s += smp.log_likelihood;
        return s / double(samples.size());
    }
};

}  // namespace hgr
