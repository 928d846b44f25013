#pragma once

#include <cstdint>
#include <vector>

#include "hgr/rng.hpp"
#include "hgr/types.hpp"

namespace hgr {

// Precomputed selection tables over a fixed observation matrix. Proposal
// weights (x_ij + 1) never change during a run, so pair and vertex draws
// reduce to binary searches over static cumulative sums. Shared read-only
// across chains.
class ObservationIndex {
  public:
    explicit ObservationIndex(const ObservationMatrix& x);

    Vertex n() const { return n_; }
    std::uint64_t pair_count() const { return x_.size(); }
    std::int64_t count(std::uint32_t pair_idx) const { return x_[pair_idx]; }
    std::int64_t count(Vertex i, Vertex j) const {
        return x_[pair_index(i, j, n_)];
    }
    const std::vector<std::int64_t>& counts() const { return x_; }

    std::int64_t pair_weight(std::uint32_t pair_idx) const { return x_[pair_idx] + 1; }
    std::int64_t total_pair_weight() const { return total_pair_weight_; }

    std::int64_t vertex_weight(Vertex i) const { return vertex_weight_[i]; }
    std::int64_t total_vertex_weight() const { return total_vertex_weight_; }

    // -sum log(x_ij!), the label-independent likelihood constant.
    double log_factorial_const() const { return log_factorial_const_; }

    // Pair drawn with probability proportional to x_ij + 1.
    std::uint32_t sample_pair(Rng& rng) const;
    // Vertex drawn with probability proportional to sum_{l != i}(x_il + 1).
    Vertex sample_vertex(Rng& rng) const;
    // Neighbor of i drawn with probability proportional to x_il + 1, l != i.
    Vertex sample_neighbor(Vertex i, Rng& rng) const;

    // Probability that the three-step selection produces the unordered
    // triplet {i, j, k}; independent of the current structure.
    double triple_selection_prob(const VertexTriple& t) const;

    VertexPair pair_at(std::uint32_t pair_idx) const { return pair_lookup_[pair_idx]; }

  private:
    Vertex n_ = 0;
    std::vector<std::int64_t> x_;
    std::vector<VertexPair> pair_lookup_;
    std::vector<double> pair_cum_;
    std::vector<std::int64_t> vertex_weight_;
    std::vector<double> vertex_cum_;
    std::vector<double> row_cum_;  // n x n row-major
    std::int64_t total_pair_weight_ = 0;
    std::int64_t total_vertex_weight_ = 0;
    double log_factorial_const_ = 0.0;
};

}  // namespace hgr
