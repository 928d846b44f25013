#pragma once

#include <array>
#include <vector>

#include "hgr/rng.hpp"
#include "hgr/types.hpp"

namespace hgr {

// Three-component Poisson mixture fitted to the flattened pair counts;
// components are reported in ascending rate order.
struct PoissonMixture {
    std::array<double, 3> rates{};
    std::array<double, 3> weights{};
    double log_likelihood = 0.0;
    int iterations = 0;
    std::vector<double> loglik_path;  // one entry per EM iteration
};

PoissonMixture poisson_mixture_em(const ObservationMatrix& x, Rng& rng, int max_iter = 500,
                                  double tol = 1e-8);

}  // namespace hgr
