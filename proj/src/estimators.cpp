#include "hgr/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "hgr/distributions.hpp"
#include "hgr/likelihood.hpp"
#include "hgr/parallel.hpp"

namespace hgr {

namespace {

LabelMatrix labels_of(const PosteriorSample& s) {
    return s.kind() == ModelKind::hypergraph ? project_labels(s.hypergraph())
                                             : graph_labels(s.graph());
}

double percentile(std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double idx = p * double(sorted.size() - 1);
    const std::size_t lo = std::size_t(std::floor(idx));
    const std::size_t hi = std::size_t(std::ceil(idx));
    const double w = idx - double(lo);
    return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

PercentileBand band_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    PercentileBand b;
    b.median = percentile(values, 0.5);
    b.p025 = percentile(values, 0.025);
    b.p25 = percentile(values, 0.25);
    b.p75 = percentile(values, 0.75);
    b.p975 = percentile(values, 0.975);
    return b;
}

}  // namespace

const PosteriorSample& map_estimate(const ChainTrace& trace) {
    if (trace.samples.empty()) throw std::invalid_argument("map_estimate: empty trace");
    std::size_t best = 0;
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
        if (trace.samples[i].log_joint > trace.samples[best].log_joint) best = i;
    return trace.samples[best];
}

std::variant<Hypergraph, CategoricalGraph> edgewise_estimate(const ChainTrace& trace) {
    if (trace.samples.empty()) throw std::invalid_argument("edgewise_estimate: empty trace");
    const std::size_t n_samples = trace.samples.size();
    const ModelKind kind = trace.samples.front().kind();

    if (kind == ModelKind::hypergraph) {
        const Vertex n = trace.samples.front().hypergraph().n();
        std::unordered_map<VertexPair, std::size_t, PairHash> pair_freq;
        std::unordered_map<VertexTriple, std::size_t, TripleHash> triple_freq;
        for (const auto& s : trace.samples) {
            for (const auto& e : s.hypergraph().two_edges()) pair_freq[e] += 1;
            for (const auto& t : s.hypergraph().three_edges()) triple_freq[t] += 1;
        }
        Hypergraph out(n);
        for (const auto& [e, cnt] : pair_freq)
            if (2 * cnt > n_samples) out.add_two_edge(e);
        for (const auto& [t, cnt] : triple_freq)
            if (2 * cnt > n_samples) out.add_three_edge(t);
        return out;
    }

    const Vertex n = trace.samples.front().graph().n();
    std::unordered_map<VertexPair, std::size_t, PairHash> weak_freq, strong_freq;
    for (const auto& s : trace.samples) {
        for (const auto& e : s.graph().weak_edges()) weak_freq[e] += 1;
        for (const auto& e : s.graph().strong_edges()) strong_freq[e] += 1;
    }
    CategoricalGraph out(n);
    for (const auto& [e, cnt] : strong_freq)
        if (2 * cnt > n_samples) out.add_strong_edge(e);
    for (const auto& [e, cnt] : weak_freq)
        if (2 * cnt > n_samples && !out.has_strong(e)) out.add_weak_edge(e);
    return out;
}

LabelMatrix marginal_label_estimate(const ChainTrace& trace, Rng& rng) {
    if (trace.samples.empty())
        throw std::invalid_argument("marginal_label_estimate: empty trace");
    const ModelKind kind = trace.samples.front().kind();
    const Vertex n = kind == ModelKind::hypergraph ? trace.samples.front().hypergraph().n()
                                                   : trace.samples.front().graph().n();
    const std::uint64_t pairs = n_choose_2(n);
    std::vector<std::array<std::uint32_t, 3>> freq(pairs, {0, 0, 0});
    for (const auto& s : trace.samples) {
        const LabelMatrix lm = labels_of(s);
        for (std::uint64_t idx = 0; idx < pairs; ++idx) freq[idx][lm.at_index(idx)] += 1;
    }
    LabelMatrix out(n);
    for (std::uint64_t idx = 0; idx < pairs; ++idx) {
        const auto& f = freq[idx];
        const std::uint32_t mx = std::max({f[0], f[1], f[2]});
        Label winners[3];
        int n_winners = 0;
        for (Label l = 0; l < 3; ++l)
            if (f[l] == mx) winners[n_winners++] = l;
        out.set_index(idx, n_winners == 1 ? winners[0]
                                          : winners[rng.uniform_int(std::uint64_t(n_winners))]);
    }
    return out;
}

ConfusionMatrix confusion(const LabelMatrix& truth, const LabelMatrix& predicted) {
    if (truth.n() != predicted.n())
        throw std::invalid_argument("confusion: dimension mismatch");
    ConfusionMatrix out;
    for (std::uint64_t idx = 0; idx < truth.pair_count(); ++idx)
        out.c[truth.at_index(idx)][predicted.at_index(idx)] += 1;
    return out;
}

double reconstruction_error(const ConfusionMatrix& cm) {
    const auto& c = cm.c;
    const std::int64_t denom =
        c[1][0] + c[1][1] + c[1][2] + c[2][0] + c[2][1] + c[2][2];
    if (denom == 0)
        throw std::domain_error("reconstruction_error: no nonzero true labels");
    return double(c[1][0] + c[1][2] + c[2][0] + c[2][1]) / double(denom);
}

EntropyReport label_entropy(const ConfusionMatrix& cm, Vertex n) {
    EntropyReport out;
    const double pairs = double(n_choose_2(n));
    const double log3 = std::log(3.0);
    for (int k = 0; k < 3; ++k) {
        out.rho[k] = double(cm.c[0][k] + cm.c[1][k] + cm.c[2][k]) / pairs;
        if (out.rho[k] > 0.0) out.entropy -= out.rho[k] * std::log(out.rho[k]) / log3;
    }
    return out;
}

NormalizedConfusion normalized_confusion(const ConfusionMatrix& cm) {
    NormalizedConfusion out;
    for (int r = 0; r < 3; ++r) {
        const std::int64_t row = cm.c[r][0] + cm.c[r][1] + cm.c[r][2];
        out.row_defined[r] = row > 0;
        for (int s = 0; s < 3; ++s)
            out.c[r][s] = row > 0 ? double(cm.c[r][s]) / double(row) : 0.0;
    }
    return out;
}

double edge_triangle_fraction(const Hypergraph& h) {
    if (h.h1() == 0) throw std::domain_error("edge_triangle_fraction: no 2-edges");
    const Vertex n = h.n();
    const LabelMatrix lm = project_labels(h);
    std::int64_t inside = 0;
    for (const auto& e : h.two_edges()) {
        for (Vertex k = 0; k < n; ++k) {
            if (k == e.a || k == e.b) continue;
            if (lm.at(e.a, k) > 0 && lm.at(e.b, k) > 0) { ++inside; break; }
        }
    }
    return double(inside) / double(h.h1());
}

bool apply_categorical_reporting_rule(LabelMatrix& predicted) {
    bool any_weak = false;
    for (auto l : predicted.raw()) {
        if (l == 2) return false;
        any_weak |= (l == 1);
    }
    if (!any_weak) return false;
    for (std::uint64_t idx = 0; idx < predicted.pair_count(); ++idx)
        if (predicted.at_index(idx) == 1) predicted.set_index(idx, 2);
    return true;
}

std::array<PercentileBand, 3> posterior_predictive_residuals(const ObservationMatrix& x,
                                                             const ChainTrace& trace,
                                                             int n_pred, Rng& rng,
                                                             int workers) {
    if (trace.samples.empty())
        throw std::invalid_argument("posterior_predictive_residuals: empty trace");
    if (n_pred <= 0) throw std::invalid_argument("n_pred must be positive");

    // Cache each retained sample's labels once; draws reuse them.
    std::vector<LabelMatrix> labels;
    labels.reserve(trace.samples.size());
    for (const auto& s : trace.samples) labels.push_back(labels_of(s));
    if (labels.front().n() != x.n())
        throw std::invalid_argument("posterior_predictive_residuals: dimension mismatch");

    std::vector<std::array<double, 3>> residuals(n_pred);
    const Rng base = rng.split(0x70737264);  // substream for the whole check
#pragma omp parallel for schedule(static) num_threads(resolve_workers(workers))
    for (int r = 0; r < n_pred; ++r) {
        Rng draw_rng = base.split(std::uint64_t(r));
        const std::size_t pick = draw_rng.uniform_int(trace.samples.size());
        const LabelMatrix& lm = labels[pick];
        const RateParams& mu = trace.samples[pick].mu;
        const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
        std::array<double, 3> res{0.0, 0.0, 0.0};
        for (std::uint64_t idx = 0; idx < lm.pair_count(); ++idx) {
            Rng pair_rng = draw_rng.split(idx);
            const Label l = lm.at_index(idx);
            const std::int64_t pred = dist::sample_poisson(rates[l], pair_rng);
            res[l] += double(x.at_index(idx) - pred);
        }
        residuals[r] = res;
    }

    std::array<PercentileBand, 3> out;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> vals(n_pred);
        for (int r = 0; r < n_pred; ++r) vals[r] = residuals[r][k];
        out[k] = band_of(std::move(vals));
    }
    return out;
}

MetricsReport compute_metrics(const Hypergraph& truth, const ObservationMatrix& x,
                              const ChainTrace& trace, ModelKind model, int n_pred, Rng& rng,
                              const RateParams* true_mu) {
    if (truth.n() != x.n()) throw std::invalid_argument("compute_metrics: dimension mismatch");
    MetricsReport out;

    const LabelMatrix true_labels = project_labels(truth);
    LabelMatrix predicted = marginal_label_estimate(trace, rng);

    if (model == ModelKind::categorical) {
        out.reporting_rule_fired = apply_categorical_reporting_rule(predicted);
        if (true_mu != nullptr && true_mu->mu1 > true_mu->mu2) {
            // The fitted categories are rate-ordered; align them with the
            // true labels when the generating rates were reversed.
            out.rate_order_swapped = true;
            for (std::uint64_t idx = 0; idx < predicted.pair_count(); ++idx) {
                const Label l = predicted.at_index(idx);
                if (l != 0) predicted.set_index(idx, Label(3 - l));
            }
        }
    }

    out.confusion_matrix = confusion(true_labels, predicted);
    try {
        out.epsilon = reconstruction_error(out.confusion_matrix);
    } catch (const std::domain_error&) {
        out.epsilon = std::nullopt;
    }
    out.entropy = label_entropy(out.confusion_matrix, truth.n());
    out.normalized = normalized_confusion(out.confusion_matrix);
    try {
        out.e_delta = edge_triangle_fraction(truth);
    } catch (const std::domain_error&) {
        out.e_delta = std::nullopt;
    }
    out.residuals = posterior_predictive_residuals(x, trace, n_pred, rng);
    return out;
}

}  // namespace hgr
