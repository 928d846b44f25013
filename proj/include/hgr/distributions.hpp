#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

#include "hgr/rng.hpp"

namespace hgr::dist {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared prior hyperparameters: Beta(xi, zeta) on every structure
// probability, Gamma(alpha_k, beta_k) shapes/rates on the Poisson means.
struct Hyperparams {
    double xi = 1.1;
    double zeta = 5.0;
    double alpha[3] = {1.05, 1.05, 1.05};
    double beta[3] = {0.5, 0.5, 0.5};

    void validate() const {
        auto pos = [](double x, const char* what) {
            if (!(x > 0.0))
                throw std::invalid_argument(std::string(what) + " must be positive");
        };
        pos(xi, "xi");
        pos(zeta, "zeta");
        for (int k = 0; k < 3; ++k) {
            pos(alpha[k], "alpha");
            pos(beta[k], "beta");
        }
    }
    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct TruncInterval {
    double lo = 0.0;
    double hi = kInf;

    TruncInterval() = default;
    TruncInterval(double l, double h) : lo(l), hi(h) {
        if (!(lo >= 0.0) || !(lo < hi))
            throw std::invalid_argument("truncation interval requires 0 <= lo < hi");
    }
    bool bounded() const { return hi < kInf; }
};

// Raised when a truncation interval carries no mass reachable by any of the
// sampling strategies (in practice: an unbounded tail beyond double
// resolution).
struct DegenerateTruncation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Which branch of the truncated-gamma cascade produced a draw.
enum class TruncGammaStrategy { rejection, inverse_cdf, linear };

double sample_gamma(double shape, double rate, Rng& rng);
double sample_beta(double a, double b, Rng& rng);

// Density (1 + c x) / 2 on [-1, 1]; c = 0 degenerates to the uniform.
double sample_linear(double c, Rng& rng);

// Truncated gamma on (iv.lo, iv.hi): plain rejection when the untruncated
// acceptance mass is at least `rejection_threshold`, otherwise inverse-CDF
// through the regularized incomplete gamma, otherwise rejection from a
// linear tilt fitted to the density chord (finite narrow intervals only).
double sample_truncated_gamma(double shape, double rate, const TruncInterval& iv, Rng& rng,
                              TruncGammaStrategy* used = nullptr,
                              double rejection_threshold = 0.1);

std::int64_t sample_poisson(double mu, Rng& rng);

double log_gamma_pdf(double x, double shape, double rate);
double log_beta_pdf(double x, double a, double b);
double log_trunc_gamma_pdf(double x, double shape, double rate, const TruncInterval& iv);

// Regularized gamma CDF/quantile in shape-rate parameterization.
double gamma_cdf(double x, double shape, double rate);
double gamma_quantile(double p, double shape, double rate);

// P(lo < Y < hi) for Y ~ Gamma(shape, rate), evaluated from whichever tail
// keeps the difference well conditioned.
double gamma_interval_mass(double shape, double rate, const TruncInterval& iv);

}  // namespace hgr::dist
