#include "hgr/hypergraph_sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hgr {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(std::uint32_t n, std::uint32_t k) {
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}
}  // namespace

HypergraphSampler::HypergraphSampler(const Hypergraph& h, const RateParams& mu,
                                     const HypergraphProbs& probs,
                                     const ObservationIndex& obs, const McmcConfig& cfg)
    : obs_(obs),
      eta_(cfg.eta),
      nu2_(cfg.nu2),
      nu3_(cfg.nu3),
      chi0_(cfg.chi0),
      chi1_(cfg.chi1),
      e_set_(obs.pair_count()),
      c0_(obs.pair_count()),
      c1_(obs.pair_count()) {
    if (h.n() != obs.n()) throw std::invalid_argument("hypergraph/observation dimension mismatch");
    if (h.n() < 3) throw std::invalid_argument("hypergraph sampler requires n >= 3");
    cfg.validate();
    mu.require_order(ModelKind::hypergraph);

    const Vertex n = h.n();
    triple_capacity_ = n_choose_3(n);
    in_e_.assign(obs.pair_count(), 0);
    cover_.assign(obs.pair_count(), 0);

    for (const auto& e : h.two_edges()) {
        const auto idx = std::uint32_t(pair_index(e, n));
        in_e_[idx] = 1;
        e_set_.insert(idx);
    }
    h1_ = std::int64_t(h.h1());

    triples_.reserve(h.h2());
    for (const auto& t : h.three_edges()) {
        triple_pos_[triple_key(t)] = std::uint32_t(triples_.size());
        triples_.push_back(t);
        cover_[pair_index(t.a, t.b, n)] += 1;
        cover_[pair_index(t.a, t.c, n)] += 1;
        cover_[pair_index(t.b, t.c, n)] += 1;
    }
    h2_ = std::int64_t(h.h2());

    for (std::uint32_t idx = 0; idx < in_e_.size(); ++idx) {
        const Label l = label(idx);
        stats_.x_sum[l] += obs_.count(idx);
        stats_.pair_count[l] += 1;
        if (!in_e_[idx]) sum_w_absent_ += obs_.pair_weight(idx);
        if (cover_[idx] > 0) {
            if (in_e_[idx]) c0_.insert(idx);
            else c1_.insert(idx);
        }
    }
    set_params(mu, probs);
}

void HypergraphSampler::set_params(const RateParams& mu, const HypergraphProbs& probs) {
    mu.require_order(ModelKind::hypergraph);
    StructureProbs(probs).validate();
    mu_ = mu;
    probs_ = probs;
    log_mu_[0] = std::log(mu.mu0);
    log_mu_[1] = std::log(mu.mu1);
    log_mu_[2] = std::log(mu.mu2);
    log_q_ = std::log(probs.q);
    log_1mq_ = std::log1p(-probs.q);
    log_p_ = std::log(probs.p);
    log_1mp_ = std::log1p(-probs.p);
}

double HypergraphSampler::log_structure_prior() const {
    const double pairs = double(in_e_.size());
    const double triples = double(triple_capacity_);
    return double(h1_) * log_q_ + (pairs - double(h1_)) * log_1mq_ +
           double(h2_) * log_p_ + (triples - double(h2_)) * log_1mp_;
}

// Probability that a drawn move survives the hidden-move feasibility redraw;
// infeasible hidden draws are thrown back and the whole move is redrawn, so
// every surviving move is scaled by 1/Z with Z the surviving mass.
double HypergraphSampler::log_redraw_norm(std::uint32_t c0_size, std::uint32_t c1_size) const {
    const double nu_h = 1.0 - nu2_ - nu3_;
    double infeasible = 0.0;
    if (c1_size < 2) infeasible += nu_h * eta_;
    if (c0_size < 2) infeasible += nu_h * (1.0 - eta_);
    return std::log1p(-infeasible);
}

// Direction probability within the 2-edge or 3-edge class: eta / 1-eta in the
// interior, forced to 1 when the opposite direction has no legal target.
double HypergraphSampler::log_dir_prob(bool add, std::int64_t count,
                                       std::int64_t capacity) const {
    const bool can_add = count < capacity;
    const bool can_rem = count > 0;
    if (add) {
        if (!can_add) return kNegInf;
        return can_rem ? std::log(eta_) : 0.0;
    }
    if (!can_rem) return kNegInf;
    return can_add ? std::log1p(-eta_) : 0.0;
}

std::uint32_t HypergraphSampler::sample_absent_pair(Rng& rng) {
    for (int tries = 0; tries < 256; ++tries) {
        const std::uint32_t idx = obs_.sample_pair(rng);
        if (!in_e_[idx]) return idx;
    }
    std::int64_t target = std::int64_t(rng.uniform() * double(sum_w_absent_));
    std::uint32_t last_valid = IndexedSet::kNone;
    for (std::uint32_t idx = 0; idx < in_e_.size(); ++idx) {
        if (in_e_[idx]) continue;
        last_valid = idx;
        target -= obs_.pair_weight(idx);
        if (target < 0) break;
    }
    return last_valid;
}

// Block size from the truncated geometric on [2, cap].
std::uint32_t HypergraphSampler::sample_block_size(double chi, std::uint32_t cap,
                                                   Rng& rng) const {
    const double tail = -std::expm1(double(cap - 1) * std::log1p(-chi));
    const double u = rng.uniform();
    const double raw = 1.0 + std::ceil(std::log1p(-u * tail) / std::log1p(-chi));
    if (!(raw >= 2.0)) return 2;
    if (raw >= double(cap)) return cap;
    return std::uint32_t(raw);
}

// Probability of drawing exactly the unordered set e (|e| = m) from a hidden
// set of the given size: truncated-geometric size times a uniform subset.
double HypergraphSampler::log_hidden_set_prob(std::uint32_t m, std::uint32_t set_size,
                                              double chi) const {
    const double log_tail = std::log(-std::expm1(double(set_size - 1) * std::log1p(-chi)));
    return double(m - 2) * std::log1p(-chi) + std::log(chi) - log_tail -
           log_binomial(set_size, m);
}

HypergraphSampler::SetDelta HypergraphSampler::hidden_set_delta(const HgProposal& p) const {
    SetDelta d;
    switch (p.kind) {
        case HgMove::add2:
            if (cover_[p.pair] > 0) { d.d_c0 = 1; d.d_c1 = -1; }
            break;
        case HgMove::rem2:
            if (cover_[p.pair] > 0) { d.d_c0 = -1; d.d_c1 = 1; }
            break;
        case HgMove::add3: {
            const std::uint32_t idx[3] = {
                std::uint32_t(pair_index(p.triple.a, p.triple.b, obs_.n())),
                std::uint32_t(pair_index(p.triple.a, p.triple.c, obs_.n())),
                std::uint32_t(pair_index(p.triple.b, p.triple.c, obs_.n()))};
            for (auto i : idx)
                if (cover_[i] == 0) (in_e_[i] ? d.d_c0 : d.d_c1) += 1;
            break;
        }
        case HgMove::rem3: {
            const std::uint32_t idx[3] = {
                std::uint32_t(pair_index(p.triple.a, p.triple.b, obs_.n())),
                std::uint32_t(pair_index(p.triple.a, p.triple.c, obs_.n())),
                std::uint32_t(pair_index(p.triple.b, p.triple.c, obs_.n()))};
            for (auto i : idx)
                if (cover_[i] == 1) (in_e_[i] ? d.d_c0 : d.d_c1) -= 1;
            break;
        }
        case HgMove::add_hidden:
            d.d_c0 = std::int32_t(p.hidden.size());
            d.d_c1 = -std::int32_t(p.hidden.size());
            break;
        case HgMove::rem_hidden:
            d.d_c0 = -std::int32_t(p.hidden.size());
            d.d_c1 = std::int32_t(p.hidden.size());
            break;
    }
    return d;
}

double HypergraphSampler::pair_loglik_delta(std::uint32_t pair_idx, Label from, Label to) const {
    if (from == to) return 0.0;
    const double x = double(obs_.count(pair_idx));
    const double mus[3] = {mu_.mu0, mu_.mu1, mu_.mu2};
    return x * (log_mu_[to] - log_mu_[from]) - (mus[to] - mus[from]);
}

HgProposal HypergraphSampler::propose(Rng& rng) {
    const std::int64_t pairs = std::int64_t(in_e_.size());
    HgProposal p;

    // Draw (class, direction) until feasible; only hidden moves can fail and
    // trigger a full redraw.
    for (;;) {
        const double u = rng.uniform();
        if (u < nu2_) {
            const bool can_add = h1_ < pairs, can_rem = h1_ > 0;
            const bool add = (can_add && can_rem) ? (rng.uniform() < eta_) : can_add;
            p.kind = add ? HgMove::add2 : HgMove::rem2;
            break;
        }
        if (u < nu2_ + nu3_) {
            const bool can_add = h2_ < std::int64_t(triple_capacity_), can_rem = h2_ > 0;
            const bool add = (can_add && can_rem) ? (rng.uniform() < eta_) : can_add;
            p.kind = add ? HgMove::add3 : HgMove::rem3;
            break;
        }
        const bool add = rng.uniform() < eta_;
        if (add && c1_.size() >= 2) { p.kind = HgMove::add_hidden; break; }
        if (!add && c0_.size() >= 2) { p.kind = HgMove::rem_hidden; break; }
        // infeasible hidden move: a completely new move is drawn
    }

    const double log_z = log_redraw_norm(c0_.size(), c1_.size());

    switch (p.kind) {
        case HgMove::add2: {
            p.pair = sample_absent_pair(rng);
            const std::int64_t w = obs_.pair_weight(p.pair);
            p.log_q_forward = std::log(nu2_) + log_dir_prob(true, h1_, pairs) +
                              std::log(double(w)) - std::log(double(sum_w_absent_)) - log_z;
            const auto d = hidden_set_delta(p);
            p.log_q_reverse = std::log(nu2_) + log_dir_prob(false, h1_ + 1, pairs) -
                              std::log(double(h1_ + 1)) -
                              log_redraw_norm(c0_.size() + d.d_c0, c1_.size() + d.d_c1);
            p.log_pi_delta = log_q_ - log_1mq_;
            if (cover_[p.pair] == 0) p.log_pi_delta += pair_loglik_delta(p.pair, 0, 1);
            break;
        }
        case HgMove::rem2: {
            p.pair = e_set_.sample(rng);
            const std::int64_t w = obs_.pair_weight(p.pair);
            p.log_q_forward = std::log(nu2_) + log_dir_prob(false, h1_, pairs) -
                              std::log(double(h1_)) - log_z;
            const auto d = hidden_set_delta(p);
            p.log_q_reverse = std::log(nu2_) + log_dir_prob(true, h1_ - 1, pairs) +
                              std::log(double(w)) - std::log(double(sum_w_absent_ + w)) -
                              log_redraw_norm(c0_.size() + d.d_c0, c1_.size() + d.d_c1);
            p.log_pi_delta = -(log_q_ - log_1mq_);
            if (cover_[p.pair] == 0) p.log_pi_delta += pair_loglik_delta(p.pair, 1, 0);
            break;
        }
        case HgMove::add3: {
            const Vertex i = obs_.sample_vertex(rng);
            const Vertex j = obs_.sample_neighbor(i, rng);
            const Vertex k = obs_.sample_neighbor(i, rng);
            if (j == k) { p.auto_rejected = true; return p; }
            p.triple = VertexTriple(i, j, k);
            if (triple_pos_.count(triple_key(p.triple))) { p.auto_rejected = true; return p; }
            p.log_q_forward = std::log(nu3_) + log_dir_prob(true, h2_, triple_capacity_) +
                              std::log(obs_.triple_selection_prob(p.triple)) - log_z;
            const auto d = hidden_set_delta(p);
            p.log_q_reverse = std::log(nu3_) +
                              log_dir_prob(false, h2_ + 1, triple_capacity_) -
                              std::log(double(h2_ + 1)) -
                              log_redraw_norm(c0_.size() + d.d_c0, c1_.size() + d.d_c1);
            p.log_pi_delta = log_p_ - log_1mp_;
            const std::uint32_t idx[3] = {
                std::uint32_t(pair_index(p.triple.a, p.triple.b, obs_.n())),
                std::uint32_t(pair_index(p.triple.a, p.triple.c, obs_.n())),
                std::uint32_t(pair_index(p.triple.b, p.triple.c, obs_.n()))};
            for (auto x : idx)
                if (cover_[x] == 0)
                    p.log_pi_delta += pair_loglik_delta(x, in_e_[x] ? 1 : 0, 2);
            break;
        }
        case HgMove::rem3: {
            p.triple = triples_[rng.uniform_int(triples_.size())];
            p.log_q_forward = std::log(nu3_) + log_dir_prob(false, h2_, triple_capacity_) -
                              std::log(double(h2_)) - log_z;
            const auto d = hidden_set_delta(p);
            p.log_q_reverse = std::log(nu3_) + log_dir_prob(true, h2_ - 1, triple_capacity_) +
                              std::log(obs_.triple_selection_prob(p.triple)) -
                              log_redraw_norm(c0_.size() + d.d_c0, c1_.size() + d.d_c1);
            p.log_pi_delta = -(log_p_ - log_1mp_);
            const std::uint32_t idx[3] = {
                std::uint32_t(pair_index(p.triple.a, p.triple.b, obs_.n())),
                std::uint32_t(pair_index(p.triple.a, p.triple.c, obs_.n())),
                std::uint32_t(pair_index(p.triple.b, p.triple.c, obs_.n()))};
            for (auto x : idx)
                if (cover_[x] == 1)
                    p.log_pi_delta += pair_loglik_delta(x, 2, in_e_[x] ? 1 : 0);
            break;
        }
        case HgMove::add_hidden: {
            const std::uint32_t m = sample_block_size(chi1_, c1_.size(), rng);
            c1_.sample_distinct(m, rng, p.hidden);
            const double nu_h = 1.0 - nu2_ - nu3_;
            p.log_q_forward = std::log(nu_h) + std::log(eta_) +
                              log_hidden_set_prob(m, c1_.size(), chi1_) - log_z;
            p.log_q_reverse = std::log(nu_h) + std::log1p(-eta_) +
                              log_hidden_set_prob(m, c0_.size() + m, chi0_) -
                              log_redraw_norm(c0_.size() + m, c1_.size() - m);
            p.log_pi_delta = double(m) * (log_q_ - log_1mq_);
            break;
        }
        case HgMove::rem_hidden: {
            const std::uint32_t m = sample_block_size(chi0_, c0_.size(), rng);
            c0_.sample_distinct(m, rng, p.hidden);
            const double nu_h = 1.0 - nu2_ - nu3_;
            p.log_q_forward = std::log(nu_h) + std::log1p(-eta_) +
                              log_hidden_set_prob(m, c0_.size(), chi0_) - log_z;
            p.log_q_reverse = std::log(nu_h) + std::log(eta_) +
                              log_hidden_set_prob(m, c1_.size() + m, chi1_) -
                              log_redraw_norm(c0_.size() - m, c1_.size() + m);
            p.log_pi_delta = -double(m) * (log_q_ - log_1mq_);
            break;
        }
    }
    return p;
}

bool HypergraphSampler::accept_test(const HgProposal& p, Rng& rng) const {
    if (p.auto_rejected) return false;
    const double log_alpha = p.log_pi_delta + p.log_q_reverse - p.log_q_forward;
    if (log_alpha >= 0.0) return true;
    return std::log(rng.uniform()) < log_alpha;
}

void HypergraphSampler::apply(const HgProposal& p) {
    const Vertex n = obs_.n();
    const auto move_stats = [&](std::uint32_t idx, Label from, Label to) {
        const std::int64_t x = obs_.count(idx);
        stats_.x_sum[from] -= x;
        stats_.pair_count[from] -= 1;
        stats_.x_sum[to] += x;
        stats_.pair_count[to] += 1;
    };

    switch (p.kind) {
        case HgMove::add2: {
            const std::uint32_t idx = p.pair;
            in_e_[idx] = 1;
            e_set_.insert(idx);
            h1_ += 1;
            sum_w_absent_ -= obs_.pair_weight(idx);
            if (cover_[idx] > 0) { c1_.erase(idx); c0_.insert(idx); }
            else move_stats(idx, 0, 1);
            break;
        }
        case HgMove::rem2: {
            const std::uint32_t idx = p.pair;
            in_e_[idx] = 0;
            e_set_.erase(idx);
            h1_ -= 1;
            sum_w_absent_ += obs_.pair_weight(idx);
            if (cover_[idx] > 0) { c0_.erase(idx); c1_.insert(idx); }
            else move_stats(idx, 1, 0);
            break;
        }
        case HgMove::add3: {
            triple_pos_[triple_key(p.triple)] = std::uint32_t(triples_.size());
            triples_.push_back(p.triple);
            h2_ += 1;
            const std::uint32_t idx[3] = {std::uint32_t(pair_index(p.triple.a, p.triple.b, n)),
                                          std::uint32_t(pair_index(p.triple.a, p.triple.c, n)),
                                          std::uint32_t(pair_index(p.triple.b, p.triple.c, n))};
            for (auto i : idx) {
                if (cover_[i] == 0) {
                    move_stats(i, in_e_[i] ? 1 : 0, 2);
                    (in_e_[i] ? c0_ : c1_).insert(i);
                }
                cover_[i] += 1;
            }
            break;
        }
        case HgMove::rem3: {
            const auto it = triple_pos_.find(triple_key(p.triple));
            const std::uint32_t pos = it->second;
            const std::uint32_t last = std::uint32_t(triples_.size()) - 1;
            triples_[pos] = triples_[last];
            triple_pos_[triple_key(triples_[pos])] = pos;
            triples_.pop_back();
            triple_pos_.erase(it);
            h2_ -= 1;
            const std::uint32_t idx[3] = {std::uint32_t(pair_index(p.triple.a, p.triple.b, n)),
                                          std::uint32_t(pair_index(p.triple.a, p.triple.c, n)),
                                          std::uint32_t(pair_index(p.triple.b, p.triple.c, n))};
            for (auto i : idx) {
                cover_[i] -= 1;
                if (cover_[i] == 0) {
                    move_stats(i, 2, in_e_[i] ? 1 : 0);
                    (in_e_[i] ? c0_ : c1_).erase(i);
                }
            }
            break;
        }
        case HgMove::add_hidden: {
            for (auto idx : p.hidden) {
                in_e_[idx] = 1;
                e_set_.insert(idx);
                c1_.erase(idx);
                c0_.insert(idx);
                sum_w_absent_ -= obs_.pair_weight(idx);
            }
            h1_ += std::int64_t(p.hidden.size());
            break;
        }
        case HgMove::rem_hidden: {
            for (auto idx : p.hidden) {
                in_e_[idx] = 0;
                e_set_.erase(idx);
                c0_.erase(idx);
                c1_.insert(idx);
                sum_w_absent_ += obs_.pair_weight(idx);
            }
            h1_ -= std::int64_t(p.hidden.size());
            break;
        }
    }
}

bool HypergraphSampler::step(Rng& rng) {
    const HgProposal p = propose(rng);
    if (!accept_test(p, rng)) return false;
    apply(p);
    return true;
}

Hypergraph HypergraphSampler::to_hypergraph() const {
    Hypergraph h(obs_.n());
    for (std::uint32_t idx = 0; idx < in_e_.size(); ++idx)
        if (in_e_[idx]) h.add_two_edge(obs_.pair_at(idx));
    for (const auto& t : triples_) h.add_three_edge(t);
    return h;
}

Hypergraph mh_step_hypergraph(const Hypergraph& h, const RateParams& mu,
                              const HypergraphProbs& probs, const ObservationMatrix& x,
                              const McmcConfig& cfg, Rng& rng) {
    ObservationIndex obs(x);
    HypergraphSampler sampler(h, mu, probs, obs, cfg);
    sampler.step(rng);
    return sampler.to_hypergraph();
}

}  // namespace hgr
