#include "hgr/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "hgr/labels.hpp"

namespace hgr {

namespace {

bool bernoulli(double p, Rng& rng) { return rng.uniform() < p; }

void check_prob(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

// Geometric on {0,1,2,...} with mean m, success probability 1/(m+1).
std::uint32_t geometric_mean(double mean, Rng& rng) {
    if (!(mean > 0.0)) throw std::invalid_argument("geometric mean must be positive");
    const double q = mean / (mean + 1.0);  // continuation probability
    const double u = rng.uniform();
    const double v = std::log1p(-u) / std::log(q);
    if (!(v >= 0.0)) return 0;
    return v >= 4e9 ? 4000000000u : std::uint32_t(v);
}

double standard_normal(Rng& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(6.283185307179586 * u2);
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void SbmParams::validate() const {
    if (community_sizes.size() != 2 || community_sizes[0] == 0 || community_sizes[1] == 0)
        throw std::invalid_argument("SBM expects two nonempty communities");
    check_prob(q11, "q11");
    check_prob(q12, "q12");
    check_prob(q22, "q22");
    check_prob(p1, "p1");
    check_prob(p2, "p2");
    check_prob(p_out, "p_out");
}

Hypergraph random_hypergraph(Vertex n, double p, double q, Rng& rng) {
    check_prob(p, "p");
    check_prob(q, "q");
    Hypergraph h(n);
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (bernoulli(q, rng)) h.add_two_edge(VertexPair(i, j));
    for (Vertex i = 0; i + 2 < n; ++i)
        for (Vertex j = i + 1; j + 1 < n; ++j)
            for (Vertex k = j + 1; k < n; ++k)
                if (bernoulli(p, rng)) h.add_three_edge(VertexTriple(i, j, k));
    return h;
}

Hypergraph best_case_hypergraph(Vertex n, double p, double q, Rng& rng) {
    Hypergraph h = random_hypergraph(n, p, q, rng);

    // Covered pairs stay covered throughout; only 2-edges are deleted.
    LabelMatrix labels = project_labels(h);

    // Hidden 2-edges violate the construction outright.
    for (const auto& e : h.sorted_two_edges())
        if (labels.at(e.a, e.b) == 2) h.remove_two_edge(e);

    // Greedy canonical scan: drop any 2-edge that closes a triangle of
    // nonzero labels in the current projection.
    labels = project_labels(h);
    for (const auto& e : h.sorted_two_edges()) {
        bool in_triangle = false;
        for (Vertex k = 0; k < n && !in_triangle; ++k) {
            if (k == e.a || k == e.b) continue;
            in_triangle = labels.at(e.a, k) > 0 && labels.at(e.b, k) > 0;
        }
        if (in_triangle) {
            h.remove_two_edge(e);
            labels.set(e.a, e.b, 0);
        }
    }
    return h;
}

Hypergraph worst_case_hypergraph(std::uint32_t n_cliques, std::uint32_t clique_size,
                                 double promote_prob, Rng& rng) {
    if (clique_size < 3) throw std::invalid_argument("worst case requires clique_size >= 3");
    if (n_cliques == 0) throw std::invalid_argument("worst case requires at least one clique");
    check_prob(promote_prob, "promote_prob");
    const std::uint64_t n64 = std::uint64_t(n_cliques) * clique_size;
    if (n64 > 0xffffffffULL) throw std::invalid_argument("vertex budget overflow");
    const Vertex n = Vertex(n64);

    Hypergraph h(n);
    for (std::uint32_t c = 0; c < n_cliques; ++c) {
        const Vertex base = Vertex(c * clique_size);
        for (Vertex i = 0; i < clique_size; ++i)
            for (Vertex j = i + 1; j < clique_size; ++j)
                h.add_two_edge(VertexPair(base + i, base + j));
        for (Vertex i = 0; i < clique_size; ++i)
            for (Vertex j = i + 1; j < clique_size; ++j)
                for (Vertex k = j + 1; k < clique_size; ++k)
                    if (bernoulli(promote_prob, rng))
                        h.add_three_edge(VertexTriple(base + i, base + j, base + k));
    }
    return h;
}

Hypergraph hypergraph_sbm(const SbmParams& params, Rng& rng) {
    params.validate();
    const Vertex n = params.community_sizes[0] + params.community_sizes[1];
    const auto community = [&](Vertex v) { return v < params.community_sizes[0] ? 0 : 1; };

    Hypergraph h(n);
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) {
            const int ci = community(i), cj = community(j);
            const double q = ci == cj ? (ci == 0 ? params.q11 : params.q22) : params.q12;
            if (bernoulli(q, rng)) h.add_two_edge(VertexPair(i, j));
        }
    for (Vertex i = 0; i + 2 < n; ++i)
        for (Vertex j = i + 1; j + 1 < n; ++j)
            for (Vertex k = j + 1; k < n; ++k) {
                const int ci = community(i), cj = community(j), ck = community(k);
                double p = params.p_out;
                if (ci == cj && cj == ck) p = ci == 0 ? params.p1 : params.p2;
                if (bernoulli(p, rng)) h.add_three_edge(VertexTriple(i, j, k));
            }
    return h;
}

Hypergraph triangle_edge_cm(Vertex n, double mean2, double mean3, Rng& rng) {
    if (n < 3) throw std::invalid_argument("configuration model requires n >= 3");

    std::vector<std::uint32_t> deg2(n), deg3(n);
    for (Vertex v = 0; v < n; ++v) deg2[v] = geometric_mean(mean2, rng);
    for (Vertex v = 0; v < n; ++v) deg3[v] = geometric_mean(mean3, rng);

    // Repair divisibility by resampling a single uniformly chosen vertex.
    auto total = [](const std::vector<std::uint32_t>& d) {
        return std::accumulate(d.begin(), d.end(), std::uint64_t{0});
    };
    while (total(deg2) % 2 != 0) {
        const Vertex v = Vertex(rng.uniform_int(n));
        deg2[v] = geometric_mean(mean2, rng);
    }
    while (total(deg3) % 3 != 0) {
        const Vertex v = Vertex(rng.uniform_int(n));
        deg3[v] = geometric_mean(mean3, rng);
    }

    const auto stub_list = [](const std::vector<std::uint32_t>& deg) {
        std::vector<Vertex> stubs;
        for (Vertex v = 0; v < Vertex(deg.size()); ++v)
            for (std::uint32_t s = 0; s < deg[v]; ++s) stubs.push_back(v);
        return stubs;
    };
    const auto shuffle = [&rng](std::vector<Vertex>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_int(i)]);
    };

    Hypergraph h(n);
    std::vector<Vertex> stubs2 = stub_list(deg2);
    shuffle(stubs2);
    for (std::size_t i = 0; i + 1 < stubs2.size(); i += 2) {
        if (stubs2[i] == stubs2[i + 1]) continue;  // erased self-loop
        h.add_two_edge(VertexPair(stubs2[i], stubs2[i + 1]));
    }
    std::vector<Vertex> stubs3 = stub_list(deg3);
    shuffle(stubs3);
    for (std::size_t i = 0; i + 2 < stubs3.size(); i += 3) {
        const Vertex a = stubs3[i], b = stubs3[i + 1], c = stubs3[i + 2];
        if (a == b || a == c || b == c) continue;  // erased degenerate triple
        h.add_three_edge(VertexTriple(a, b, c));
    }
    return h;
}

Hypergraph beta_model_hypergraph(Vertex n, const BetaModelParams& params, Rng& rng) {
    if (!(params.sd2 > 0.0 && params.sd3 > 0.0))
        throw std::invalid_argument("beta-model standard deviations must be positive");
    std::vector<double> b2(n), b3(n);
    for (Vertex v = 0; v < n; ++v) b2[v] = params.mean2 + params.sd2 * standard_normal(rng);
    for (Vertex v = 0; v < n; ++v) b3[v] = params.mean3 + params.sd3 * standard_normal(rng);

    Hypergraph h(n);
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (bernoulli(logistic(b2[i] + b2[j]), rng)) h.add_two_edge(VertexPair(i, j));
    for (Vertex i = 0; i + 2 < n; ++i)
        for (Vertex j = i + 1; j + 1 < n; ++j)
            for (Vertex k = j + 1; k < n; ++k)
                if (bernoulli(logistic(b3[i] + b3[j] + b3[k]), rng))
                    h.add_three_edge(VertexTriple(i, j, k));
    return h;
}

BipartiteResult bipartite_to_hypergraph(const std::vector<BipartiteRecord>& records,
                                        std::uint32_t max_group_size) {
    std::map<std::string, std::set<std::string>> groups;
    for (const auto& r : records) {
        if (r.entity.empty() || r.group.empty())
            throw std::invalid_argument("bipartite record with empty field");
        groups[r.group].insert(r.entity);
    }

    // Collect the entities that survive the size cap, in sorted order for a
    // deterministic dense reindexing.
    std::set<std::string> kept;
    std::size_t dropped = 0;
    for (const auto& [name, members] : groups) {
        if (members.size() > max_group_size) { ++dropped; continue; }
        if (members.size() >= 2) kept.insert(members.begin(), members.end());
    }

    BipartiteResult out;
    out.dropped_groups = dropped;
    out.vertex_names.assign(kept.begin(), kept.end());
    std::map<std::string, Vertex> index;
    for (Vertex v = 0; v < Vertex(out.vertex_names.size()); ++v) index[out.vertex_names[v]] = v;

    Hypergraph h(Vertex(out.vertex_names.size()));
    for (const auto& [name, members] : groups) {
        if (members.size() < 2 || members.size() > max_group_size) continue;
        std::vector<Vertex> vs;
        for (const auto& m : members) vs.push_back(index.at(m));
        std::sort(vs.begin(), vs.end());
        if (vs.size() == 2) {
            h.add_two_edge(VertexPair(vs[0], vs[1]));
        } else {
            for (std::size_t a = 0; a < vs.size(); ++a)
                for (std::size_t b = a + 1; b < vs.size(); ++b)
                    for (std::size_t c = b + 1; c < vs.size(); ++c)
                        h.add_three_edge(VertexTriple(vs[a], vs[b], vs[c]));
        }
    }
    out.hypergraph = std::move(h);
    return out;
}

}  // namespace hgr
