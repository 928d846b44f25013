#include "hgr/observation_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hgr {

ObservationIndex::ObservationIndex(const ObservationMatrix& x)
    : n_(x.n()), x_(x.raw()) {
    if (x_.size() > 0xffffffffULL)
        throw std::invalid_argument("observation matrix too large for 32-bit pair indexing");
    pair_lookup_.reserve(x_.size());
    pair_cum_.reserve(x_.size());
    double running = 0.0;
    for (Vertex i = 0; i + 1 < n_; ++i) {
        for (Vertex j = i + 1; j < n_; ++j) {
            const std::int64_t c = x_[pair_lookup_.size()];
            pair_lookup_.push_back(VertexPair(i, j));
            total_pair_weight_ += c + 1;
            running += double(c + 1);
            pair_cum_.push_back(running);
            if (c > 1) log_factorial_const_ -= std::lgamma(double(c) + 1.0);
        }
    }

    vertex_weight_.assign(n_, 0);
    for (std::uint32_t idx = 0; idx < pair_lookup_.size(); ++idx) {
        const auto [a, b] = pair_lookup_[idx];
        vertex_weight_[a] += x_[idx] + 1;
        vertex_weight_[b] += x_[idx] + 1;
    }
    vertex_cum_.resize(n_);
    running = 0.0;
    for (Vertex i = 0; i < n_; ++i) {
        total_vertex_weight_ += vertex_weight_[i];
        running += double(vertex_weight_[i]);
        vertex_cum_[i] = running;
    }

    row_cum_.assign(std::size_t(n_) * n_, 0.0);
    for (Vertex i = 0; i < n_; ++i) {
        running = 0.0;
        for (Vertex l = 0; l < n_; ++l) {
            if (l != i) running += double(x_[pair_index(i, l, n_)] + 1);
            row_cum_[std::size_t(i) * n_ + l] = running;
        }
    }
}

std::uint32_t ObservationIndex::sample_pair(Rng& rng) const {
    const double target = rng.uniform() * pair_cum_.back();
    const auto it = std::upper_bound(pair_cum_.begin(), pair_cum_.end(), target);
    return std::uint32_t(std::min<std::ptrdiff_t>(it - pair_cum_.begin(),
                                                  std::ptrdiff_t(pair_cum_.size()) - 1));
}

Vertex ObservationIndex::sample_vertex(Rng& rng) const {
    const double target = rng.uniform() * vertex_cum_.back();
    const auto it = std::upper_bound(vertex_cum_.begin(), vertex_cum_.end(), target);
    return Vertex(std::min<std::ptrdiff_t>(it - vertex_cum_.begin(),
                                           std::ptrdiff_t(vertex_cum_.size()) - 1));
}

Vertex ObservationIndex::sample_neighbor(Vertex i, Rng& rng) const {
    const auto* row = row_cum_.data() + std::size_t(i) * n_;
    const double target = rng.uniform() * row[n_ - 1];
    const auto* it = std::upper_bound(row, row + n_, target);
    Vertex l = Vertex(std::min<std::ptrdiff_t>(it - row, n_ - 1));
    if (l == i) ++l;  // zero-weight own slot can only be hit by rounding
    return l;
}

double ObservationIndex::triple_selection_prob(const VertexTriple& t) const {
    const double w_ab = double(count(t.a, t.b) + 1);
    const double w_ac = double(count(t.a, t.c) + 1);
    const double w_bc = double(count(t.b, t.c) + 1);
    const double tw = double(total_vertex_weight_);
    return 2.0 / tw *
           (w_ab * w_ac / double(vertex_weight_[t.a]) +
            w_ab * w_bc / double(vertex_weight_[t.b]) +
            w_ac * w_bc / double(vertex_weight_[t.c]));
}

}  // namespace hgr
