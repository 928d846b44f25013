#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace hgr {

using Vertex = std::uint32_t;

enum class ModelKind { hypergraph, categorical };

inline const char* model_name(ModelKind m) {
    return m == ModelKind::hypergraph ? "hypergraph" : "categorical";
}

inline std::uint64_t n_choose_2(std::uint64_t n) { return n * (n - 1) / 2; }
inline std::uint64_t n_choose_3(std::uint64_t n) {
    return n < 3 ? 0 : n * (n - 1) / 2 * (n - 2) / 3;
}

// Unordered pair stored in canonical (a < b) order.
struct VertexPair {
    Vertex a = 0, b = 0;

    VertexPair() = default;
    VertexPair(Vertex i, Vertex j) : a(std::min(i, j)), b(std::max(i, j)) {
        if (i == j) throw std::invalid_argument("vertex pair requires two distinct vertices");
    }
    friend bool operator==(const VertexPair&, const VertexPair&) = default;
    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

// Unordered triple stored in canonical (a < b < c) order.
struct VertexTriple {
    Vertex a = 0, b = 0, c = 0;

    VertexTriple() = default;
    VertexTriple(Vertex i, Vertex j, Vertex k) {
        Vertex v[3] = {i, j, k};
        std::sort(v, v + 3);
        if (v[0] == v[1] || v[1] == v[2])
            throw std::invalid_argument("vertex triple requires three distinct vertices");
        a = v[0]; b = v[1]; c = v[2];
    }
    friend bool operator==(const VertexTriple&, const VertexTriple&) = default;
    friend auto operator<=>(const VertexTriple&, const VertexTriple&) = default;
};

struct PairHash {
    std::size_t operator()(const VertexPair& p) const {
        return std::hash<std::uint64_t>{}((std::uint64_t(p.a) << 32) | p.b);
    }
};

struct TripleHash {
    std::size_t operator()(const VertexTriple& t) const {
        std::uint64_t h = (std::uint64_t(t.a) << 42) ^ (std::uint64_t(t.b) << 21) ^ t.c;
        h ^= h >> 33; h *= 0xff51afd7ed558ccdULL; h ^= h >> 33;
        return std::size_t(h);
    }
};

using PairSet = std::unordered_set<VertexPair, PairHash>;
using TripleSet = std::unordered_set<VertexTriple, TripleHash>;

// Dense index of the canonical pair (i, j), i < j, within the upper triangle.
inline std::uint64_t pair_index(Vertex i, Vertex j, Vertex n) {
    if (i > j) std::swap(i, j);
    return std::uint64_t(i) * n - std::uint64_t(i) * (i + 1) / 2 + (j - i - 1);
}
inline std::uint64_t pair_index(const VertexPair& p, Vertex n) {
    return pair_index(p.a, p.b, n);
}

// Inverse of pair_index; linear scan over rows, O(n) worst case.
inline VertexPair pair_from_index(std::uint64_t idx, Vertex n) {
    std::uint64_t offset = 0;
    for (Vertex i = 0; i + 1 < n; ++i) {
        const std::uint64_t row = n - 1 - i;
        if (idx < offset + row) return VertexPair(i, Vertex(i + 1 + (idx - offset)));
        offset += row;
    }
    throw std::out_of_range("pair index out of range");
}

namespace detail {
inline void check_vertex(Vertex v, Vertex n, const char* what) {
    if (v >= n) throw std::out_of_range(std::string(what) + ": vertex index out of range");
}
}  // namespace detail

// Latent structure with 2-edges and 3-edges over n vertices; simple by
// construction (duplicate inserts are no-ops reported through the return
// value).
class Hypergraph {
  public:
    Hypergraph() = default;
    explicit Hypergraph(Vertex n) : n_(n) {}

    Vertex n() const { return n_; }
    const PairSet& two_edges() const { return two_; }
    const TripleSet& three_edges() const { return three_; }
    std::size_t h1() const { return two_.size(); }
    std::size_t h2() const { return three_.size(); }

    bool has_two_edge(const VertexPair& p) const { return two_.count(p) > 0; }
    bool has_three_edge(const VertexTriple& t) const { return three_.count(t) > 0; }

    bool add_two_edge(const VertexPair& p) {
        detail::check_vertex(p.b, n_, "2-edge");
        return two_.insert(p).second;
    }
    bool remove_two_edge(const VertexPair& p) { return two_.erase(p) > 0; }
    bool add_three_edge(const VertexTriple& t) {
        detail::check_vertex(t.c, n_, "3-edge");
        return three_.insert(t).second;
    }
    bool remove_three_edge(const VertexTriple& t) { return three_.erase(t) > 0; }

    std::vector<VertexPair> sorted_two_edges() const {
        std::vector<VertexPair> v(two_.begin(), two_.end());
        std::sort(v.begin(), v.end());
        return v;
    }
    std::vector<VertexTriple> sorted_three_edges() const {
        std::vector<VertexTriple> v(three_.begin(), three_.end());
        std::sort(v.begin(), v.end());
        return v;
    }

    friend bool operator==(const Hypergraph& x, const Hypergraph& y) {
        return x.n_ == y.n_ && x.two_ == y.two_ && x.three_ == y.three_;
    }

  private:
    Vertex n_ = 0;
    PairSet two_;
    TripleSet three_;
};

// Graph whose edges carry one of two categories; a pair holds at most one.
class CategoricalGraph {
  public:
    CategoricalGraph() = default;
    explicit CategoricalGraph(Vertex n) : n_(n) {}

    Vertex n() const { return n_; }
    const PairSet& weak_edges() const { return weak_; }
    const PairSet& strong_edges() const { return strong_; }
    std::size_t m1() const { return weak_.size(); }
    std::size_t m2() const { return strong_.size(); }

    bool has_weak(const VertexPair& p) const { return weak_.count(p) > 0; }
    bool has_strong(const VertexPair& p) const { return strong_.count(p) > 0; }

    bool add_weak_edge(const VertexPair& p) {
        detail::check_vertex(p.b, n_, "weak edge");
        if (strong_.count(p))
            throw std::invalid_argument("pair already holds a strong edge");
        return weak_.insert(p).second;
    }
    bool add_strong_edge(const VertexPair& p) {
        detail::check_vertex(p.b, n_, "strong edge");
        if (weak_.count(p))
            throw std::invalid_argument("pair already holds a weak edge");
        return strong_.insert(p).second;
    }
    bool remove_weak_edge(const VertexPair& p) { return weak_.erase(p) > 0; }
    bool remove_strong_edge(const VertexPair& p) { return strong_.erase(p) > 0; }

    std::vector<VertexPair> sorted_weak_edges() const {
        std::vector<VertexPair> v(weak_.begin(), weak_.end());
        std::sort(v.begin(), v.end());
        return v;
    }
    std::vector<VertexPair> sorted_strong_edges() const {
        std::vector<VertexPair> v(strong_.begin(), strong_.end());
        std::sort(v.begin(), v.end());
        return v;
    }

    friend bool operator==(const CategoricalGraph& x, const CategoricalGraph& y) {
        return x.n_ == y.n_ && x.weak_ == y.weak_ && x.strong_ == y.strong_;
    }

  private:
    Vertex n_ = 0;
    PairSet weak_;
    PairSet strong_;
};

// Symmetric integer observation counts, stored once per unordered pair
// (upper triangle, dense); diagonal is excluded from the model entirely.
class ObservationMatrix {
  public:
    ObservationMatrix() = default;
    explicit ObservationMatrix(Vertex n) : n_(n), counts_(n_choose_2(n), 0) {}

    Vertex n() const { return n_; }
    std::uint64_t pair_count() const { return counts_.size(); }

    std::int64_t at(Vertex i, Vertex j) const { return counts_[checked_index(i, j)]; }
    std::int64_t at_index(std::uint64_t idx) const { return counts_.at(idx); }

    void set(Vertex i, Vertex j, std::int64_t value) {
        if (value < 0) throw std::invalid_argument("observation counts must be non-negative");
        counts_[checked_index(i, j)] = value;
    }
    void set_index(std::uint64_t idx, std::int64_t value) {
        if (value < 0) throw std::invalid_argument("observation counts must be non-negative");
        counts_.at(idx) = value;
    }

    const std::vector<std::int64_t>& raw() const { return counts_; }

    std::int64_t total() const {
        std::int64_t s = 0;
        for (auto v : counts_) s += v;
        return s;
    }

    friend bool operator==(const ObservationMatrix&, const ObservationMatrix&) = default;

  private:
    std::uint64_t checked_index(Vertex i, Vertex j) const {
        if (i == j) throw std::invalid_argument("diagonal entries are undefined");
        detail::check_vertex(std::max(i, j), n_, "observation");
        return pair_index(i, j, n_);
    }

    Vertex n_ = 0;
    std::vector<std::int64_t> counts_;
};

using Label = std::uint8_t;  // 0: none, 1: weak / 2-edge, 2: covered by a 3-edge

// One label per unordered pair, dense upper triangle.
class LabelMatrix {
  public:
    LabelMatrix() = default;
    explicit LabelMatrix(Vertex n) : n_(n), labels_(n_choose_2(n), 0) {}

    Vertex n() const { return n_; }
    std::uint64_t pair_count() const { return labels_.size(); }

    Label at(Vertex i, Vertex j) const { return labels_[pair_index(i, j, n_)]; }
    Label at_index(std::uint64_t idx) const { return labels_.at(idx); }

    void set(Vertex i, Vertex j, Label l) {
        if (l > 2) throw std::invalid_argument("labels live in {0,1,2}");
        labels_[pair_index(i, j, n_)] = l;
    }
    void set_index(std::uint64_t idx, Label l) {
        if (l > 2) throw std::invalid_argument("labels live in {0,1,2}");
        labels_.at(idx) = l;
    }

    const std::vector<Label>& raw() const { return labels_; }

    friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

  private:
    Vertex n_ = 0;
    std::vector<Label> labels_;
};

// Poisson means per interaction type.
struct RateParams {
    double mu0 = 0, mu1 = 0, mu2 = 0;

    double operator[](Label l) const { return l == 0 ? mu0 : (l == 1 ? mu1 : mu2); }

    bool satisfies_order(ModelKind model) const {
        if (model == ModelKind::categorical) return mu0 < mu1 && mu1 < mu2;
        return mu0 < mu1 && mu0 < mu2;
    }
    void require_order(ModelKind model) const {
        if (!satisfies_order(model))
            throw std::invalid_argument(std::string("rate ordering violated for ") +
                                        model_name(model) + " model");
    }
    friend bool operator==(const RateParams&, const RateParams&) = default;
};

struct HypergraphProbs {
    double q = 0;  // 2-edge probability
    double p = 0;  // 3-edge probability
    friend bool operator==(const HypergraphProbs&, const HypergraphProbs&) = default;
};

struct CategoricalProbs {
    double q1 = 0;  // weak-edge probability
    double q2 = 0;  // strong-edge probability
    friend bool operator==(const CategoricalProbs&, const CategoricalProbs&) = default;
};

struct StructureProbs {
    std::variant<HypergraphProbs, CategoricalProbs> v;

    StructureProbs() : v(HypergraphProbs{}) {}
    StructureProbs(HypergraphProbs h) : v(h) { validate(); }
    StructureProbs(CategoricalProbs c) : v(c) { validate(); }

    ModelKind kind() const {
        return std::holds_alternative<HypergraphProbs>(v) ? ModelKind::hypergraph
                                                          : ModelKind::categorical;
    }
    const HypergraphProbs& hypergraph() const { return std::get<HypergraphProbs>(v); }
    const CategoricalProbs& categorical() const { return std::get<CategoricalProbs>(v); }

    void validate() const {
        auto check = [](double x, const char* what) {
            if (!(x > 0.0 && x < 1.0))
                throw std::invalid_argument(std::string(what) + " must lie in (0,1)");
        };
        if (kind() == ModelKind::hypergraph) {
            check(hypergraph().q, "q");
            check(hypergraph().p, "p");
        } else {
            check(categorical().q1, "q1");
            check(categorical().q2, "q2");
        }
    }
    friend bool operator==(const StructureProbs&, const StructureProbs&) = default;
};

}  // namespace hgr
