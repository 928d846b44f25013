#include "hgr/mixture_em.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hgr {

namespace {

double percentile_of(const std::vector<std::pair<std::int64_t, std::int64_t>>& hist,
                     std::int64_t total, double p) {
    std::int64_t target = std::int64_t(p * double(total));
    std::int64_t seen = 0;
    for (const auto& [value, count] : hist) {
        seen += count;
        if (seen > target) return double(value);
    }
    return double(hist.back().first);
}

}  // namespace

PoissonMixture poisson_mixture_em(const ObservationMatrix& x, Rng& rng, int max_iter,
                                  double tol) {
    std::map<std::int64_t, std::int64_t> histogram;
    for (auto v : x.raw()) histogram[v] += 1;
    std::vector<std::pair<std::int64_t, std::int64_t>> hist(histogram.begin(), histogram.end());
    const std::int64_t total = std::int64_t(x.raw().size());
    if (total == 0) throw std::invalid_argument("empty observation matrix");

    // Nonzero-value percentiles make a serviceable starting point even when
    // the zero class dominates.
    std::vector<std::pair<std::int64_t, std::int64_t>> nonzero;
    std::int64_t nonzero_total = 0;
    for (const auto& e : hist)
        if (e.first > 0) { nonzero.push_back(e); nonzero_total += e.second; }

    const double overall_mean = double(x.total()) / double(total);
    std::array<double, 3> lambda;
    if (nonzero_total > 0) {
        lambda[0] = std::max(percentile_of(hist, total, 0.10), 1e-3);
        lambda[1] = std::max(percentile_of(nonzero, nonzero_total, 0.40), 1e-2);
        lambda[2] = std::max(percentile_of(nonzero, nonzero_total, 0.90), 2e-2);
    } else {
        lambda = {1e-3, 2e-3, 3e-3};
    }
    // Break exact collisions; degenerate data keeps components apart by
    // jitter only.
    for (int k = 1; k < 3; ++k)
        if (lambda[k] <= lambda[k - 1])
            lambda[k] = lambda[k - 1] * (1.0 + 0.05 + 0.1 * rng.uniform()) + 1e-6;
    (void)overall_mean;

    std::array<double, 3> weight = {1.0 / 3, 1.0 / 3, 1.0 / 3};

    PoissonMixture out;
    double prev_ll = -std::numeric_limits<double>::infinity();
    std::array<double, 3> resp_sum{}, resp_value_sum{};

    for (int iter = 0; iter < max_iter; ++iter) {
        resp_sum = {0, 0, 0};
        resp_value_sum = {0, 0, 0};
        double ll = 0.0;
        for (const auto& [value, count] : hist) {
            const double v = double(value);
            double logp[3];
            double mx = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < 3; ++k) {
                const double lam = std::max(lambda[k], 1e-12);
                logp[k] = std::log(weight[k]) + v * std::log(lam) - lam;
                mx = std::max(mx, logp[k]);
            }
            double z = 0.0;
            for (int k = 0; k < 3; ++k) z += std::exp(logp[k] - mx);
            ll += double(count) * (mx + std::log(z) - std::lgamma(v + 1.0));
            for (int k = 0; k < 3; ++k) {
                const double r = std::exp(logp[k] - mx) / z;
                resp_sum[k] += double(count) * r;
                resp_value_sum[k] += double(count) * r * v;
            }
        }
        out.loglik_path.push_back(ll);
        out.iterations = iter + 1;
        for (int k = 0; k < 3; ++k) {
            weight[k] = std::max(resp_sum[k] / double(total), 1e-12);
            lambda[k] = resp_value_sum[k] / std::max(resp_sum[k], 1e-12);
        }
        if (std::fabs(ll - prev_ll) < tol) { prev_ll = ll; break; }
        prev_ll = ll;
    }

    // Sort components by rate; keep rates strictly distinct (jittered) so the
    // chain initialization satisfies the ordering constraints.
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return lambda[a] < lambda[b]; });
    for (int k = 0; k < 3; ++k) {
        out.rates[k] = lambda[order[k]];
        out.weights[k] = weight[order[k]];
    }
    for (int k = 1; k < 3; ++k)
        if (out.rates[k] <= out.rates[k - 1])
            out.rates[k] = out.rates[k - 1] * (1.0 + 1e-4 + 1e-4 * rng.uniform()) + 1e-9;
    out.log_likelihood = prev_ll;
    return out;
}

}  // namespace hgr
