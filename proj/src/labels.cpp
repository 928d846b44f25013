#include "hgr/labels.hpp"

#include <algorithm>

namespace hgr {

LabelMatrix project_labels(const Hypergraph& h) {
    const Vertex n = h.n();
    LabelMatrix labels(n);
    for (const auto& e : h.two_edges())
        labels.set_index(pair_index(e, n), 1);
    for (const auto& t : h.three_edges()) {
        labels.set_index(pair_index(t.a, t.b, n), 2);
        labels.set_index(pair_index(t.a, t.c, n), 2);
        labels.set_index(pair_index(t.b, t.c, n), 2);
    }
    return labels;
}

LabelMatrix graph_labels(const CategoricalGraph& g) {
    const Vertex n = g.n();
    LabelMatrix labels(n);
    for (const auto& e : g.weak_edges()) labels.set_index(pair_index(e, n), 1);
    for (const auto& e : g.strong_edges()) labels.set_index(pair_index(e, n), 2);
    return labels;
}

HiddenEdgeSets hidden_edge_sets(const Hypergraph& h) {
    PairSet covered;
    for (const auto& t : h.three_edges()) {
        covered.insert(VertexPair(t.a, t.b));
        covered.insert(VertexPair(t.a, t.c));
        covered.insert(VertexPair(t.b, t.c));
    }
    HiddenEdgeSets out;
    for (const auto& p : covered) {
        if (h.has_two_edge(p))
            out.existing.push_back(p);
        else
            out.absent.push_back(p);
    }
    std::sort(out.existing.begin(), out.existing.end());
    std::sort(out.absent.begin(), out.absent.end());
    return out;
}

}  // namespace hgr
