#include "hgr/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "hgr/distributions.hpp"
#include "hgr/parallel.hpp"

namespace hgr {

namespace {

void check_same_n(Vertex a, Vertex b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void check_mu_positive(const RateParams& mu) {
    if (!(mu.mu0 > 0.0 && mu.mu1 > 0.0 && mu.mu2 > 0.0))
        throw std::invalid_argument("log-likelihood requires strictly positive rates");
}

}  // namespace

SuffStats sufficient_stats(const ObservationMatrix& x, const LabelMatrix& labels) {
    check_same_n(x.n(), labels.n(), "sufficient_stats");
    SuffStats s;
    const auto& counts = x.raw();
    const auto& lab = labels.raw();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        s.x_sum[lab[i]] += counts[i];
        s.pair_count[lab[i]] += 1;
    }
    return s;
}

SuffStats sufficient_stats_parallel(const ObservationMatrix& x, const LabelMatrix& labels,
                                    int workers) {
    check_same_n(x.n(), labels.n(), "sufficient_stats");
    SuffStats s;
    const auto& counts = x.raw();
    const auto& lab = labels.raw();
    const std::int64_t m = static_cast<std::int64_t>(counts.size());
    std::int64_t x0 = 0, x1 = 0, x2 = 0, l0 = 0, l1 = 0, l2 = 0;
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers)) \
    reduction(+ : x0, x1, x2, l0, l1, l2)
    for (std::int64_t i = 0; i < m; ++i) {
        switch (lab[i]) {
            case 0: x0 += counts[i]; ++l0; break;
            case 1: x1 += counts[i]; ++l1; break;
            default: x2 += counts[i]; ++l2; break;
        }
    }
    s.x_sum = {x0, x1, x2};
    s.pair_count = {l0, l1, l2};
    return s;
}

double log_likelihood_from_stats(const SuffStats& stats, const RateParams& mu) {
    check_mu_positive(mu);
    double ll = 0.0;
    const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
    for (int k = 0; k < 3; ++k)
        ll += double(stats.x_sum[k]) * std::log(rates[k]) - rates[k] * double(stats.pair_count[k]);
    return ll;
}

double log_factorial_sum(const ObservationMatrix& x) {
    double s = 0.0;
    for (auto v : x.raw())
        if (v > 1) s -= std::lgamma(double(v) + 1.0);
    return s;
}

double log_likelihood(const ObservationMatrix& x, const LabelMatrix& labels,
                      const RateParams& mu) {
    check_same_n(x.n(), labels.n(), "log_likelihood");
    check_mu_positive(mu);
    const auto& counts = x.raw();
    const auto& lab = labels.raw();
    const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
    const double logs[3] = {std::log(mu.mu0), std::log(mu.mu1), std::log(mu.mu2)};
    double ll = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const Label l = lab[i];
        ll += double(counts[i]) * logs[l] - rates[l];
        if (counts[i] > 1) ll -= std::lgamma(double(counts[i]) + 1.0);
    }
    return ll;
}

double log_likelihood_parallel(const ObservationMatrix& x, const LabelMatrix& labels,
                               const RateParams& mu, int workers) {
    check_same_n(x.n(), labels.n(), "log_likelihood");
    check_mu_positive(mu);
    const auto& counts = x.raw();
    const auto& lab = labels.raw();
    const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
    const double logs[3] = {std::log(mu.mu0), std::log(mu.mu1), std::log(mu.mu2)};
    const std::int64_t m = static_cast<std::int64_t>(counts.size());
    double ll = 0.0;
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers)) \
    reduction(+ : ll)
    for (std::int64_t i = 0; i < m; ++i) {
        const Label l = lab[i];
        ll += double(counts[i]) * logs[l] - rates[l];
        if (counts[i] > 1) ll -= std::lgamma(double(counts[i]) + 1.0);
    }
    return ll;
}

namespace {

void check_mu_nonnegative(const RateParams& mu) {
    if (!(mu.mu0 >= 0.0 && mu.mu1 >= 0.0 && mu.mu2 >= 0.0))
        throw std::invalid_argument("observation generation requires non-negative rates");
}

}  // namespace

ObservationMatrix generate_observations(const LabelMatrix& labels, const RateParams& mu,
                                        const Rng& rng) {
    check_mu_nonnegative(mu);
    ObservationMatrix x(labels.n());
    const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
    for (std::uint64_t idx = 0; idx < labels.pair_count(); ++idx) {
        Rng sub = rng.split(idx);
        x.set_index(idx, dist::sample_poisson(rates[labels.at_index(idx)], sub));
    }
    return x;
}

ObservationMatrix generate_observations_parallel(const LabelMatrix& labels,
                                                 const RateParams& mu, const Rng& rng,
                                                 int workers) {
    check_mu_nonnegative(mu);
    ObservationMatrix x(labels.n());
    const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
    const std::int64_t m = static_cast<std::int64_t>(labels.pair_count());
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (std::int64_t idx = 0; idx < m; ++idx) {
        Rng sub = rng.split(std::uint64_t(idx));
        x.set_index(std::uint64_t(idx),
                    dist::sample_poisson(rates[labels.at_index(std::uint64_t(idx))], sub));
    }
    return x;
}

}  // namespace hgr
