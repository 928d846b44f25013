#pragma once

#include "hgr/types.hpp"

namespace hgr {

// Project a hypergraph onto per-pair interaction types: a pair covered by any
// 3-edge is type 2, an uncovered 2-edge is type 1, anything else type 0.
LabelMatrix project_labels(const Hypergraph& h);

// Labels of a categorical-edge graph: strong edges are type 2, weak type 1.
LabelMatrix graph_labels(const CategoricalGraph& g);

// Pairs covered by at least one 3-edge, split by whether the corresponding
// 2-edge exists. Both kinds are invisible to the likelihood.
struct HiddenEdgeSets {
    std::vector<VertexPair> existing;  // C0: 2-edges lying under a 3-edge
    std::vector<VertexPair> absent;    // C1: covered pairs without a 2-edge
};

HiddenEdgeSets hidden_edge_sets(const Hypergraph& h);

}  // namespace hgr
