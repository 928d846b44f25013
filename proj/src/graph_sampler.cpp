#include "hgr/graph_sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hgr/labels.hpp"

namespace hgr {

GraphSampler::GraphSampler(const CategoricalGraph& g, const RateParams& mu,
                           const CategoricalProbs& probs, const ObservationIndex& obs,
                           const McmcConfig& cfg)
    : obs_(obs), eta_(cfg.eta), nonzero_(obs.pair_count()) {
    if (g.n() != obs.n()) throw std::invalid_argument("graph/observation dimension mismatch");
    cfg.validate();
    mu.require_order(ModelKind::categorical);

    const LabelMatrix lm = graph_labels(g);
    labels_.assign(lm.raw().begin(), lm.raw().end());
    m1_ = std::int64_t(g.m1());
    m2_ = std::int64_t(g.m2());
    for (std::uint32_t idx = 0; idx < labels_.size(); ++idx) {
        const Label l = labels_[idx];
        stats_.x_sum[l] += obs_.count(idx);
        stats_.pair_count[l] += 1;
        if (l < 2) sum_w_lt2_ += obs_.pair_weight(idx);
        if (l > 0) nonzero_.insert(idx);
    }
    set_params(mu, probs);
}

void GraphSampler::set_params(const RateParams& mu, const CategoricalProbs& probs) {
    mu.require_order(ModelKind::categorical);
    StructureProbs(probs).validate();
    mu_ = mu;
    probs_ = probs;
    log_mu_[0] = std::log(mu.mu0);
    log_mu_[1] = std::log(mu.mu1);
    log_mu_[2] = std::log(mu.mu2);
    log_q1_ = std::log(probs.q1);
    log_1mq1_ = std::log1p(-probs.q1);
    log_q2_ = std::log(probs.q2);
    log_1mq2_ = std::log1p(-probs.q2);
}

double GraphSampler::log_structure_prior() const {
    const double pairs = double(labels_.size());
    return double(m1_) * log_q1_ + (pairs - double(m1_) - double(m2_)) * log_1mq1_ +
           double(m2_) * log_q2_ + (pairs - double(m2_)) * log_1mq2_;
}

// Probability of choosing the increment direction in a state with the given
// aggregates; boundary states force one direction with probability 1.
double GraphSampler::log_dir_prob_increment(std::int64_t m2, std::int64_t nonzero) const {
    const bool can_inc = m2 < std::int64_t(labels_.size());
    const bool can_dec = nonzero > 0;
    if (!can_inc) return -std::numeric_limits<double>::infinity();
    return can_dec ? std::log(eta_) : 0.0;
}

double GraphSampler::log_dir_prob_decrement(std::int64_t m2, std::int64_t nonzero) const {
    const bool can_inc = m2 < std::int64_t(labels_.size());
    const bool can_dec = nonzero > 0;
    if (!can_dec) return -std::numeric_limits<double>::infinity();
    return can_inc ? std::log1p(-eta_) : 0.0;
}

// Pair proportional to x+1 among labels < 2: rejection against the static
// all-pairs table, with an exact linear-scan fallback when strong edges
// dominate. Caller guarantees at least one candidate exists.
std::uint32_t GraphSampler::sample_increment_pair(Rng& rng) {
    for (int tries = 0; tries < 256; ++tries) {
        const std::uint32_t idx = obs_.sample_pair(rng);
        if (labels_[idx] < 2) return idx;
    }
    std::int64_t target = std::int64_t(rng.uniform() * double(sum_w_lt2_));
    std::uint32_t last_valid = IndexedSet::kNone;
    for (std::uint32_t idx = 0; idx < labels_.size(); ++idx) {
        if (labels_[idx] == 2) continue;
        last_valid = idx;
        target -= obs_.pair_weight(idx);
        if (target < 0) break;
    }
    return last_valid;
}

GraphProposal GraphSampler::propose(Rng& rng) {
    GraphProposal p;
    const std::int64_t pairs = std::int64_t(labels_.size());
    const std::int64_t nonzero = m1_ + m2_;
    const bool can_inc = m2_ < pairs;
    const bool can_dec = nonzero > 0;

    bool increment;
    if (can_inc && can_dec)
        increment = rng.uniform() < eta_;
    else
        increment = can_inc;  // one side is always available

    p.increment = increment;
    if (increment) {
        const std::uint32_t idx = sample_increment_pair(rng);
        p.pair = idx;
        p.from = labels_[idx];
        p.to = Label(p.from + 1);

        p.log_q_forward = log_dir_prob_increment(m2_, nonzero) +
                          std::log(double(obs_.pair_weight(idx))) -
                          std::log(double(sum_w_lt2_));
        // Reverse: decrement at the new state.
        const std::int64_t m2_new = m2_ + (p.to == 2 ? 1 : 0);
        const std::int64_t nonzero_new = nonzero + (p.from == 0 ? 1 : 0);
        p.log_q_reverse = log_dir_prob_decrement(m2_new, nonzero_new) -
                          std::log(double(nonzero_new));
    } else {
        const std::uint32_t idx = nonzero_.sample(rng);
        p.pair = idx;
        p.from = labels_[idx];
        p.to = Label(p.from - 1);

        p.log_q_forward =
            log_dir_prob_decrement(m2_, nonzero) - std::log(double(nonzero));
        const std::int64_t m2_new = m2_ - (p.from == 2 ? 1 : 0);
        const std::int64_t nonzero_new = nonzero - (p.to == 0 ? 1 : 0);
        const std::int64_t sum_new =
            sum_w_lt2_ + (p.from == 2 ? obs_.pair_weight(idx) : 0);
        p.log_q_reverse = log_dir_prob_increment(m2_new, nonzero_new) +
                          std::log(double(obs_.pair_weight(idx))) -
                          std::log(double(sum_new));
    }

    // Posterior log-ratio: one pair's likelihood term plus the prior change.
    const double x = double(obs_.count(p.pair));
    const double mus[3] = {mu_.mu0, mu_.mu1, mu_.mu2};
    p.log_pi_delta = x * (log_mu_[p.to] - log_mu_[p.from]) - (mus[p.to] - mus[p.from]);
    if (p.from == 0 && p.to == 1) p.log_pi_delta += log_q1_ - log_1mq1_;
    else if (p.from == 1 && p.to == 2) p.log_pi_delta += -log_q1_ + log_q2_ - log_1mq2_;
    else if (p.from == 2 && p.to == 1) p.log_pi_delta += log_q1_ - log_q2_ + log_1mq2_;
    else p.log_pi_delta += -log_q1_ + log_1mq1_;  // 1 -> 0

    return p;
}

bool GraphSampler::accept_test(const GraphProposal& p, Rng& rng) const {
    const double log_alpha = p.log_pi_delta + p.log_q_reverse - p.log_q_forward;
    if (log_alpha >= 0.0) return true;
    return std::log(rng.uniform()) < log_alpha;
}

void GraphSampler::apply(const GraphProposal& p) {
    const std::uint32_t idx = p.pair;
    const std::int64_t x = obs_.count(idx);
    const std::int64_t w = obs_.pair_weight(idx);

    stats_.x_sum[p.from] -= x;
    stats_.pair_count[p.from] -= 1;
    stats_.x_sum[p.to] += x;
    stats_.pair_count[p.to] += 1;

    if (p.from == 0) { m1_ += 1; nonzero_.insert(idx); }
    else if (p.from == 1 && p.to == 2) { m1_ -= 1; m2_ += 1; sum_w_lt2_ -= w; }
    else if (p.from == 2) { m2_ -= 1; m1_ += 1; sum_w_lt2_ += w; }
    else { m1_ -= 1; nonzero_.erase(idx); }  // 1 -> 0

    labels_[idx] = p.to;
}

bool GraphSampler::step(Rng& rng) {
    const GraphProposal p = propose(rng);
    if (!accept_test(p, rng)) return false;
    apply(p);
    return true;
}

CategoricalGraph GraphSampler::to_graph() const {
    CategoricalGraph g(obs_.n());
    for (std::uint32_t idx = 0; idx < labels_.size(); ++idx) {
        if (labels_[idx] == 1) g.add_weak_edge(obs_.pair_at(idx));
        else if (labels_[idx] == 2) g.add_strong_edge(obs_.pair_at(idx));
    }
    return g;
}

CategoricalGraph mh_step_graph(const CategoricalGraph& g, const RateParams& mu,
                               const CategoricalProbs& probs, const ObservationMatrix& x,
                               const McmcConfig& cfg, Rng& rng) {
    ObservationIndex obs(x);
    GraphSampler sampler(g, mu, probs, obs, cfg);
    sampler.step(rng);
    return sampler.to_graph();
}

}  // namespace hgr
