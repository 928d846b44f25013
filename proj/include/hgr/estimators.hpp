#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>

#include "hgr/labels.hpp"
#include "hgr/mcmc.hpp"
#include "hgr/rng.hpp"
#include "hgr/types.hpp"

namespace hgr {

// 3x3 count matrix: entry (r, s) is the number of pairs with true label r
// predicted as s.
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, 3>, 3> c{};

    std::int64_t total() const {
        std::int64_t t = 0;
        for (const auto& row : c)
            for (auto v : row) t += v;
        return t;
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct NormalizedConfusion {
    std::array<std::array<double, 3>, 3> c{};
    std::array<bool, 3> row_defined{};  // false where the true class is empty
};

struct PercentileBand {
    double median = 0, p025 = 0, p25 = 0, p75 = 0, p975 = 0;
    bool covers_zero() const { return p025 <= 0.0 && 0.0 <= p975; }
};

struct EntropyReport {
    double entropy = 0;
    std::array<double, 3> rho{};
};

// Retained sample with the largest unnormalized log joint posterior.
const PosteriorSample& map_estimate(const ChainTrace& trace);

// Structure containing exactly the edges whose appearance frequency across
// the retained samples exceeds one half (strictly).
std::variant<Hypergraph, CategoricalGraph> edgewise_estimate(const ChainTrace& trace);

// Per-pair argmax of the empirical label frequencies; ties broken uniformly.
LabelMatrix marginal_label_estimate(const ChainTrace& trace, Rng& rng);

ConfusionMatrix confusion(const LabelMatrix& truth, const LabelMatrix& predicted);

// Fraction of misclassified type-1/type-2 pairs. Throws std::domain_error
// when no pair carries a nonzero true label.
double reconstruction_error(const ConfusionMatrix& c);

// Entropy of the predicted-label distribution in base 3, plus the predicted
// proportions themselves.
EntropyReport label_entropy(const ConfusionMatrix& c, Vertex n);

NormalizedConfusion normalized_confusion(const ConfusionMatrix& c);

// Fraction of 2-edges whose pair sits inside a triangle of nonzero projected
// labels. Throws std::domain_error when the hypergraph has no 2-edge.
double edge_triangle_fraction(const Hypergraph& h);

// Degenerate-outcome reporting convention for the categorical model: when
// the predictions contain weak edges but no strong ones, every weak edge is
// reported as strong. Returns whether the rule fired.
bool apply_categorical_reporting_rule(LabelMatrix& predicted);

// Posterior-predictive residual sums R_k over n_pred regenerated matrices,
// summarized by percentile bands.
std::array<PercentileBand, 3> posterior_predictive_residuals(const ObservationMatrix& x,
                                                             const ChainTrace& trace,
                                                             int n_pred, Rng& rng,
                                                             int workers = 0);

struct MetricsReport {
    std::optional<double> epsilon;
    EntropyReport entropy;
    std::array<PercentileBand, 3> residuals;
    std::optional<double> e_delta;
    ConfusionMatrix confusion_matrix;
    NormalizedConfusion normalized;
    bool reporting_rule_fired = false;
    bool rate_order_swapped = false;
};

// Full diagnostic suite for one fitted trace against a ground-truth
// hypergraph. `true_mu`, when given, aligns the categorical model's
// rate-ordered classes with the true labels if the generating rates were not
// in weak < strong order.
MetricsReport compute_metrics(const Hypergraph& truth, const ObservationMatrix& x,
                              const ChainTrace& trace, ModelKind model, int n_pred, Rng& rng,
                              const RateParams* true_mu = nullptr);

}  // namespace hgr
