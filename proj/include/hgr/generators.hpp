#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hgr/rng.hpp"
#include "hgr/types.hpp"

namespace hgr {

// Two-community block model with per-community 3-edge probabilities.
struct SbmParams {
    std::vector<Vertex> community_sizes = {30, 70};
    double q11 = 0.05, q12 = 0.001, q22 = 0.02;  // 2-edge probabilities
    double p1 = 0.005, p2 = 0.0001;              // 3-edges inside each community
    double p_out = 0.00001;                      // 3-edges spanning communities

    void validate() const;
};

struct CmParams {
    double mean2 = 2.0;  // geometric mean degree, 2-edge stubs
    double mean3 = 3.0;  // geometric mean degree, 3-edge stubs
};

struct BetaModelParams {
    double mean2 = -4.5, sd2 = 2.5;  // 2-edge propensity distribution
    double mean3 = -5.0, sd3 = 2.0;  // 3-edge propensity distribution
};

// Independent-hyperedge prior: each pair with probability q, each triplet
// with probability p.
Hypergraph random_hypergraph(Vertex n, double p, double q, Rng& rng);

// Prior draw with every 2-edge that sits in a projected triangle removed:
// afterwards no triangle of nonzero labels contains a type-1 pair, and no
// 2-edge hides under a 3-edge.
Hypergraph best_case_hypergraph(Vertex n, double p, double q, Rng& rng);

// Vertex-disjoint 2-edge cliques whose triangles are promoted to 3-edges
// independently; promoted triangles keep their 2-edges.
Hypergraph worst_case_hypergraph(std::uint32_t n_cliques, std::uint32_t clique_size,
                                 double promote_prob, Rng& rng);

Hypergraph hypergraph_sbm(const SbmParams& params, Rng& rng);

// Erased configuration model with geometric stub counts on pairs and
// triples.
Hypergraph triangle_edge_cm(Vertex n, double mean2, double mean3, Rng& rng);
inline Hypergraph triangle_edge_cm(Vertex n, const CmParams& params, Rng& rng) {
    return triangle_edge_cm(n, params.mean2, params.mean3, rng);
}

Hypergraph beta_model_hypergraph(Vertex n, const BetaModelParams& params, Rng& rng);

struct BipartiteRecord {
    std::string entity;
    std::string group;
};

struct BipartiteResult {
    Hypergraph hypergraph;
    std::vector<std::string> vertex_names;  // dense index -> original entity
    std::size_t dropped_groups = 0;         // groups above the size cap
};

// Groups of size 2 become 2-edges, size 3 becomes a 3-edge, sizes 4..cap are
// decomposed into all constituent triples, larger groups are dropped.
// Isolated entities are removed and the rest reindexed densely.
BipartiteResult bipartite_to_hypergraph(const std::vector<BipartiteRecord>& records,
                                        std::uint32_t max_group_size = 5);

}  // namespace hgr
