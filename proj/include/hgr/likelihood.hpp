#pragma once

#include <array>
#include <cstdint>

#include "hgr/rng.hpp"
#include "hgr/types.hpp"

namespace hgr {

// Per-label sufficient statistics of the Poisson data model: X_k is the sum
// of counts over pairs labeled k, L_k the number of such pairs.
struct SuffStats {
    std::array<std::int64_t, 3> x_sum{0, 0, 0};
    std::array<std::int64_t, 3> pair_count{0, 0, 0};

    friend bool operator==(const SuffStats&, const SuffStats&) = default;
};

SuffStats sufficient_stats(const ObservationMatrix& x, const LabelMatrix& labels);
SuffStats sufficient_stats_parallel(const ObservationMatrix& x, const LabelMatrix& labels,
                                    int workers = 0);

// Full log-likelihood sum over pairs, including the log-factorial terms.
double log_likelihood(const ObservationMatrix& x, const LabelMatrix& labels,
                      const RateParams& mu);
double log_likelihood_parallel(const ObservationMatrix& x, const LabelMatrix& labels,
                               const RateParams& mu, int workers = 0);

// Label-dependent part only: sum_k (X_k log mu_k - mu_k L_k). Differs from
// the full log-likelihood by the label-independent factorial constant.
double log_likelihood_from_stats(const SuffStats& stats, const RateParams& mu);

// The constant: -sum_{i<j} log(x_ij!).
double log_factorial_sum(const ObservationMatrix& x);

// Draw x_ij ~ Poisson(mu_{label_ij}) independently. Each pair consumes its
// own substream of `rng`, so serial and parallel fills produce the same
// matrix for the same generator state.
ObservationMatrix generate_observations(const LabelMatrix& labels, const RateParams& mu,
                                        const Rng& rng);
ObservationMatrix generate_observations_parallel(const LabelMatrix& labels,
                                                 const RateParams& mu, const Rng& rng,
                                                 int workers = 0);

}  // namespace hgr
