#include "hgr/distributions.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace hgr::dist {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

// Marsaglia-Tsang squeeze method for shape >= 1.
double gamma_shape_ge1(double shape, Rng& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            // Box-Muller normal draw; only one of the pair is needed.
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            z = std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586 * u2);
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double sample_gamma(double shape, double rate, Rng& rng) {
    require_positive(shape, "gamma shape");
    require_positive(rate, "gamma rate");
    if (shape >= 1.0) return gamma_shape_ge1(shape, rng) / rate;
    // Boost the shape by one, then scale by U^{1/shape}.
    const double g = gamma_shape_ge1(shape + 1.0, rng);
    double u;
    do { u = rng.uniform(); } while (u <= 0.0);
    return g * std::pow(u, 1.0 / shape) / rate;
}

double sample_beta(double a, double b, Rng& rng) {
    require_positive(a, "beta shape a");
    require_positive(b, "beta shape b");
    const double x = sample_gamma(a, 1.0, rng);
    const double y = sample_gamma(b, 1.0, rng);
    const double z = x / (x + y);
    // Keep draws strictly interior; conjugate updates evaluate log(1-z).
    return std::clamp(z, 1e-15, 1.0 - 1e-15);
}

double sample_linear(double c, Rng& rng) {
    if (!(std::fabs(c) <= 1.0))
        throw std::invalid_argument("linear-distribution slope must satisfy |c| <= 1");
    const double u = rng.uniform();
    if (std::fabs(c) < 1e-12) return 2.0 * u - 1.0;  // inverse formula is singular at c = 0
    const double s = std::max(c * c - 2.0 * c + 4.0 * c * u + 1.0, 0.0);
    return std::clamp((std::sqrt(s) - 1.0) / c, -1.0, 1.0);
}

std::int64_t sample_poisson(double mu, Rng& rng) {
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("poisson mean must be finite and non-negative");
    if (mu == 0.0) return 0;
    if (mu < 10.0) {
        // Inversion by sequential search on the CDF.
        const double l = std::exp(-mu);
        std::int64_t k = 0;
        double prod = rng.uniform();
        while (prod > l) {
            prod *= rng.uniform();
            ++k;
        }
        return k;
    }
    // Hoermann's PTRS transformed rejection, exact for mu >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double k = kf;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mu - mu - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(kf);
    }
}

double log_gamma_pdf(double x, double shape, double rate) {
    require_positive(shape, "gamma shape");
    require_positive(rate, "gamma rate");
    if (!(x > 0.0)) return -kInf;
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) -
           rate * x;
}

double log_beta_pdf(double x, double a, double b) {
    require_positive(a, "beta shape a");
    require_positive(b, "beta shape b");
    if (!(x > 0.0 && x < 1.0)) return -kInf;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
}

double gamma_cdf(double x, double shape, double rate) {
    if (x <= 0.0) return 0.0;
    if (x == kInf) return 1.0;
    return boost::math::gamma_p(shape, rate * x);
}

double gamma_quantile(double p, double shape, double rate) {
    return boost::math::gamma_p_inv(shape, p) / rate;
}

double gamma_interval_mass(double shape, double rate, const TruncInterval& iv) {
    const double p_hi = gamma_cdf(iv.hi, shape, rate);
    if (p_hi < 0.5) return p_hi - gamma_cdf(iv.lo, shape, rate);
    // Right-leaning interval: the survival-function difference is better
    // conditioned than 1 - P.
    const double q_lo = iv.lo <= 0.0 ? 1.0 : boost::math::gamma_q(shape, rate * iv.lo);
    const double q_hi = iv.bounded() ? boost::math::gamma_q(shape, rate * iv.hi) : 0.0;
    return std::max(q_lo - q_hi, 0.0);
}

namespace {

// Log of the unnormalized gamma kernel.
inline double log_kernel(double y, double shape, double rate) {
    return (shape - 1.0) * std::log(y) - rate * y;
}

// Normalization of a bounded interval whose mass underflows: Simpson on the
// shifted kernel.
double log_mass_by_quadrature(double shape, double rate, const TruncInterval& iv) {
    constexpr int kPieces = 256;  // even
    const double width = iv.hi - iv.lo;
    const double guard = width * 1e-12;
    const double lo = iv.lo + guard, hi = iv.hi - guard;
    const double h = (hi - lo) / kPieces;
    double shift = -kInf;
    for (int i = 0; i <= kPieces; ++i)
        shift = std::max(shift, log_kernel(lo + h * i, shape, rate));
    double sum = 0.0;
    for (int i = 0; i <= kPieces; ++i) {
        const double w = (i == 0 || i == kPieces) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * std::exp(log_kernel(lo + h * i, shape, rate) - shift);
    }
    const double log_kernel_integral = shift + std::log(sum * h / 3.0);
    // Convert the kernel integral into the normalized-density mass.
    return log_kernel_integral + shape * std::log(rate) - std::lgamma(shape);
}

}  // namespace

double log_trunc_gamma_pdf(double x, double shape, double rate, const TruncInterval& iv) {
    if (!(x > iv.lo && x < iv.hi)) return -kInf;
    const double lg = log_gamma_pdf(x, shape, rate);
    const double mass = gamma_interval_mass(shape, rate, iv);
    if (mass > 0.0) return lg - std::log(mass);
    if (!iv.bounded())
        throw DegenerateTruncation("truncated-gamma interval mass underflows on an unbounded interval");
    return lg - log_mass_by_quadrature(shape, rate, iv);
}

double sample_truncated_gamma(double shape, double rate, const TruncInterval& iv, Rng& rng,
                              TruncGammaStrategy* used, double rejection_threshold) {
    require_positive(shape, "gamma shape");
    require_positive(rate, "gamma rate");

    const double mass = gamma_interval_mass(shape, rate, iv);

    if (mass >= rejection_threshold) {
        // Plain rejection against the untruncated gamma. The failure cap only
        // exists to bound the loop; with mass >= 0.1 it is unreachable in
        // practice and we fall through to the next strategy if hit.
        for (int tries = 0; tries < 500; ++tries) {
            const double y = sample_gamma(shape, rate, rng);
            if (y > iv.lo && y < iv.hi) {
                if (used) *used = TruncGammaStrategy::rejection;
                return y;
            }
        }
    }

    // Inverse-CDF transform, run from the better-conditioned tail. A span
    // only a few ulps wide would quantize the draws, so such intervals fall
    // through to the linear proposal instead.
    {
        constexpr double kMinUlps = 64.0 * std::numeric_limits<double>::epsilon();
        double y = std::numeric_limits<double>::quiet_NaN();
        try {
            const double p_lo = gamma_cdf(iv.lo, shape, rate);
            if (p_lo < 0.5) {
                const double p_hi = gamma_cdf(iv.hi, shape, rate);
                if (p_hi - p_lo > kMinUlps * p_hi) {
                    const double u = p_lo + rng.uniform() * (p_hi - p_lo);
                    if (u > 0.0 && u < 1.0) y = boost::math::gamma_p_inv(shape, u) / rate;
                }
            } else {
                const double q_lo = boost::math::gamma_q(shape, rate * iv.lo);
                const double q_hi =
                    iv.bounded() ? boost::math::gamma_q(shape, rate * iv.hi) : 0.0;
                if (q_lo - q_hi > kMinUlps * q_lo) {
                    const double u = q_hi + rng.uniform() * (q_lo - q_hi);
                    if (u > 0.0 && u < 1.0) y = boost::math::gamma_q_inv(shape, u) / rate;
                }
            }
        } catch (const std::exception&) {
            y = std::numeric_limits<double>::quiet_NaN();
        }
        if (std::isfinite(y) && y > iv.lo && y < iv.hi) {
            if (used) *used = TruncGammaStrategy::inverse_cdf;
            return y;
        }
    }

    // Linear-tilt rejection; only meaningful on a bounded interval, where the
    // kernel chord approximates the density well.
    if (!iv.bounded())
        throw DegenerateTruncation(
            "truncated-gamma sampling failed: unbounded interval beyond numerical resolution");

    const double width = iv.hi - iv.lo;
    const double guard = width * 1e-12;
    const double lo_eval = iv.lo + guard, hi_eval = iv.hi - guard;

    double shift = std::max(log_kernel(lo_eval, shape, rate), log_kernel(hi_eval, shape, rate));
    const double mode = (shape - 1.0) / rate;
    if (mode > lo_eval && mode < hi_eval)
        shift = std::max(shift, log_kernel(mode, shape, rate));

    const auto rel_density = [&](double y) {
        return std::exp(log_kernel(y, shape, rate) - shift);
    };

    const double r_lo = rel_density(lo_eval);
    const double r_hi = rel_density(hi_eval);
    const double denom = r_lo + r_hi;
    const double c = denom > 0.0 ? std::clamp((r_hi - r_lo) / denom, -1.0, 1.0) : 0.0;

    // Envelope constant: the chord does not dominate an interior bulge by
    // itself, so take the largest density/proposal ratio over a fine grid.
    double envelope = 0.0;
    constexpr int kGrid = 64;
    for (int i = 0; i <= kGrid; ++i) {
        const double x = -1.0 + 2.0 * double(i) / kGrid;
        const double lin = (1.0 + c * x) / 2.0;
        const double y = lo_eval + (x + 1.0) / 2.0 * (hi_eval - lo_eval);
        if (lin <= 0.0) continue;
        envelope = std::max(envelope, rel_density(y) / lin);
    }
    if (mode > lo_eval && mode < hi_eval) {
        const double x = 2.0 * (mode - lo_eval) / (hi_eval - lo_eval) - 1.0;
        const double lin = (1.0 + c * x) / 2.0;
        if (lin > 0.0) envelope = std::max(envelope, 1.0 / lin);
    }
    envelope *= 1.02;
    if (!(envelope > 0.0) || !std::isfinite(envelope))
        throw DegenerateTruncation("truncated-gamma linear fallback has a degenerate envelope");

    for (int tries = 0; tries < 1000000; ++tries) {
        const double x = sample_linear(c, rng);
        double y = std::clamp(lo_eval + (x + 1.0) / 2.0 * (hi_eval - lo_eval), lo_eval, hi_eval);
        const double lin = (1.0 + c * x) / 2.0;
        if (lin <= 0.0) continue;
        if (rng.uniform() * envelope * lin <= rel_density(y)) {
            if (y <= iv.lo) y = std::nextafter(iv.lo, kInf);
            if (y >= iv.hi) y = std::nextafter(iv.hi, -kInf);
            if (used) *used = TruncGammaStrategy::linear;
            return y;
        }
    }
    throw DegenerateTruncation("truncated-gamma linear fallback failed to accept");
}

}  // namespace hgr::dist
