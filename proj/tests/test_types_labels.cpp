#include <doctest.h>

#include <cmath>

#include "hgr/labels.hpp"
#include "hgr/likelihood.hpp"
#include "hgr/types.hpp"
#include "oracles.hpp"

using namespace hgr;

TEST_CASE("canonical pairs and triples") {
    CHECK(VertexPair(3, 1) == VertexPair(1, 3));
    CHECK(VertexTriple(5, 2, 9) == VertexTriple(2, 9, 5));
    CHECK_THROWS_AS(VertexPair(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(VertexTriple(1, 2, 2), std::invalid_argument);

    const Vertex n = 7;
    std::uint64_t expect = 0;
    for (Vertex i = 0; i + 1 < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) {
            CHECK(pair_index(i, j, n) == expect);
            CHECK(pair_from_index(expect, n) == VertexPair(i, j));
            ++expect;
        }
    CHECK(expect == n_choose_2(n));
}

TEST_CASE("hypergraph and graph invariants") {
    Hypergraph h(5);
    CHECK(h.add_two_edge(VertexPair(0, 1)));
    CHECK_FALSE(h.add_two_edge(VertexPair(1, 0)));  // duplicate, canonical form
    CHECK(h.h1() == 1);
    CHECK_THROWS_AS(h.add_two_edge(VertexPair(0, 5)), std::out_of_range);
    CHECK(h.add_three_edge(VertexTriple(0, 1, 2)));
    CHECK_FALSE(h.add_three_edge(VertexTriple(2, 1, 0)));

    CategoricalGraph g(4);
    CHECK(g.add_weak_edge(VertexPair(0, 1)));
    CHECK_THROWS_AS(g.add_strong_edge(VertexPair(0, 1)), std::invalid_argument);
    CHECK(g.add_strong_edge(VertexPair(2, 3)));
    CHECK(g.m1() == 1);
    CHECK(g.m2() == 1);
}

TEST_CASE("project_labels matches the covering rule") {
    SUBCASE("empty hypergraph") {
        const LabelMatrix lm = project_labels(Hypergraph(4));
        for (auto l : lm.raw()) CHECK(l == 0);
    }
    SUBCASE("single 3-edge") {
        Hypergraph h(4);
        h.add_three_edge(VertexTriple(1, 2, 3));
        const LabelMatrix lm = project_labels(h);
        CHECK(lm.at(1, 2) == 2);
        CHECK(lm.at(1, 3) == 2);
        CHECK(lm.at(2, 3) == 2);
        CHECK(lm.at(0, 1) == 0);
        CHECK(lm.at(0, 2) == 0);
        CHECK(lm.at(0, 3) == 0);
    }
    SUBCASE("2-edge hidden under a 3-edge leaves the projection unchanged") {
        Hypergraph with_edge(4), without_edge(4);
        with_edge.add_three_edge(VertexTriple(1, 2, 3));
        without_edge.add_three_edge(VertexTriple(1, 2, 3));
        with_edge.add_two_edge(VertexPair(1, 2));
        CHECK(project_labels(with_edge) == project_labels(without_edge));
    }
}

TEST_CASE("projection invariances over random structures") {
    Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        Hypergraph h(6);
        for (Vertex i = 0; i + 1 < 6; ++i)
            for (Vertex j = i + 1; j < 6; ++j)
                if (rng.uniform() < 0.3) h.add_two_edge(VertexPair(i, j));
        for (Vertex i = 0; i + 2 < 6; ++i)
            for (Vertex j = i + 1; j + 1 < 6; ++j)
                for (Vertex k = j + 1; k < 6; ++k)
                    if (rng.uniform() < 0.1) h.add_three_edge(VertexTriple(i, j, k));

        const LabelMatrix base = project_labels(h);
        const auto hidden = hidden_edge_sets(h);

        // Toggling any hidden 2-edge is invisible.
        for (const auto& e : hidden.existing) {
            Hypergraph mod = h;
            mod.remove_two_edge(e);
            CHECK(project_labels(mod) == base);
        }
        for (const auto& e : hidden.absent) {
            Hypergraph mod = h;
            mod.add_two_edge(e);
            CHECK(project_labels(mod) == base);
        }

        // Adding a 3-edge whose pairs are already covered is invisible.
        for (Vertex i = 0; i + 2 < 6; ++i)
            for (Vertex j = i + 1; j + 1 < 6; ++j)
                for (Vertex k = j + 1; k < 6; ++k) {
                    const VertexTriple t(i, j, k);
                    if (h.has_three_edge(t)) continue;
                    if (base.at(i, j) == 2 && base.at(i, k) == 2 && base.at(j, k) == 2) {
                        Hypergraph mod = h;
                        mod.add_three_edge(t);
                        CHECK(project_labels(mod) == base);
                    }
                }
    }
}

TEST_CASE("graph_labels basics") {
    CategoricalGraph g(4);
    g.add_weak_edge(VertexPair(0, 1));
    g.add_strong_edge(VertexPair(2, 3));
    const LabelMatrix lm = graph_labels(g);
    CHECK(lm.at(0, 1) == 1);
    CHECK(lm.at(2, 3) == 2);
    CHECK(lm.at(0, 2) == 0);
}

TEST_CASE("hidden_edge_sets partitions the covered pairs") {
    Hypergraph h(4);
    h.add_three_edge(VertexTriple(1, 2, 3));
    h.add_two_edge(VertexPair(1, 2));
    const auto hidden = hidden_edge_sets(h);
    REQUIRE(hidden.existing.size() == 1);
    CHECK(hidden.existing[0] == VertexPair(1, 2));
    REQUIRE(hidden.absent.size() == 2);
    CHECK(hidden.absent[0] == VertexPair(1, 3));
    CHECK(hidden.absent[1] == VertexPair(2, 3));

    CHECK(hidden_edge_sets(Hypergraph(5)).existing.empty());
    CHECK(hidden_edge_sets(Hypergraph(5)).absent.empty());

    Rng rng(5);
    for (int rep = 0; rep < 100; ++rep) {
        Hypergraph r(6);
        for (Vertex i = 0; i + 2 < 6; ++i)
            for (Vertex j = i + 1; j + 1 < 6; ++j)
                for (Vertex k = j + 1; k < 6; ++k)
                    if (rng.uniform() < 0.2) r.add_three_edge(VertexTriple(i, j, k));
        for (Vertex i = 0; i + 1 < 6; ++i)
            for (Vertex j = i + 1; j < 6; ++j)
                if (rng.uniform() < 0.4) r.add_two_edge(VertexPair(i, j));
        const auto sets = hidden_edge_sets(r);
        const LabelMatrix lm = project_labels(r);
        std::size_t covered = 0;
        for (auto l : lm.raw()) covered += l == 2;
        CHECK(sets.existing.size() + sets.absent.size() == covered);
    }
}

TEST_CASE("log_likelihood worked examples") {
    SUBCASE("single empty observation") {
        ObservationMatrix x(2);
        LabelMatrix lm(2);
        const RateParams mu{1.0, 2.0, 3.0};
        CHECK(log_likelihood(x, lm, mu) == doctest::Approx(-1.0));
    }
    SUBCASE("single pair with three counts") {
        ObservationMatrix x(2);
        x.set(0, 1, 3);
        LabelMatrix lm(2);
        lm.set(0, 1, 1);
        const RateParams mu{0.5, 2.0, 3.0};
        const double expected = 3.0 * std::log(2.0) - 2.0 - std::log(6.0);
        CHECK(log_likelihood(x, lm, mu) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("identical labels give identical likelihood") {
        Hypergraph a(4), b(4);
        a.add_three_edge(VertexTriple(0, 1, 2));
        b.add_three_edge(VertexTriple(0, 1, 2));
        b.add_two_edge(VertexPair(0, 1));  // hidden
        Rng rng(3);
        const RateParams mu{0.1, 2.0, 4.0};
        const ObservationMatrix x = generate_observations(project_labels(a), mu, rng);
        CHECK(log_likelihood(x, project_labels(a), mu) ==
              doctest::Approx(log_likelihood(x, project_labels(b), mu)).epsilon(1e-15));
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(log_likelihood(ObservationMatrix(3), LabelMatrix(4), RateParams{1, 2, 3}),
                        std::invalid_argument);
    }
}

TEST_CASE("sufficient statistics") {
    SUBCASE("hand-evaluated example") {
        ObservationMatrix x(3);
        x.set(0, 1, 5);
        x.set(0, 2, 0);
        x.set(1, 2, 2);
        LabelMatrix lm(3);
        lm.set(0, 1, 1);
        lm.set(0, 2, 0);
        lm.set(1, 2, 2);
        const SuffStats s = sufficient_stats(x, lm);
        CHECK(s.x_sum[0] == 0);
        CHECK(s.x_sum[1] == 5);
        CHECK(s.x_sum[2] == 2);
        CHECK(s.pair_count[0] == 1);
        CHECK(s.pair_count[1] == 1);
        CHECK(s.pair_count[2] == 1);
    }
    SUBCASE("all labels zero") {
        Rng rng(7);
        LabelMatrix lm(6);
        const ObservationMatrix x = generate_observations(lm, RateParams{3.0, 1.0, 1.0}, rng);
        const SuffStats s = sufficient_stats(x, lm);
        CHECK(s.x_sum[0] == x.total());
        CHECK(s.pair_count[0] == std::int64_t(n_choose_2(6)));
        CHECK(s.pair_count[1] == 0);
        CHECK(s.pair_count[2] == 0);
    }
    SUBCASE("vertex relabeling leaves the stats unchanged") {
        Rng rng(9);
        Hypergraph h(5);
        h.add_two_edge(VertexPair(0, 3));
        h.add_three_edge(VertexTriple(1, 2, 4));
        const LabelMatrix lm = project_labels(h);
        const RateParams mu{0.2, 3.0, 5.0};
        const ObservationMatrix x = generate_observations(lm, mu, rng);

        // Permute vertices cyclically and rebuild both structures.
        const auto perm = [](Vertex v) { return Vertex((v + 2) % 5); };
        Hypergraph hp(5);
        for (const auto& e : h.two_edges()) hp.add_two_edge(VertexPair(perm(e.a), perm(e.b)));
        for (const auto& t : h.three_edges())
            hp.add_three_edge(VertexTriple(perm(t.a), perm(t.b), perm(t.c)));
        ObservationMatrix xp(5);
        for (Vertex i = 0; i + 1 < 5; ++i)
            for (Vertex j = i + 1; j < 5; ++j) xp.set(perm(i), perm(j), x.at(i, j));

        const SuffStats a = sufficient_stats(x, lm);
        const SuffStats b = sufficient_stats(xp, project_labels(hp));
        CHECK(a == b);
    }
    SUBCASE("likelihood from stats matches the pairwise product") {
        Rng rng(13);
        Hypergraph h(8);
        for (Vertex i = 0; i + 1 < 8; ++i)
            for (Vertex j = i + 1; j < 8; ++j)
                if (rng.uniform() < 0.3) h.add_two_edge(VertexPair(i, j));
        h.add_three_edge(VertexTriple(0, 1, 2));
        h.add_three_edge(VertexTriple(3, 4, 5));
        const LabelMatrix lm = project_labels(h);
        const RateParams mu{0.05, 4.0, 7.0};
        const ObservationMatrix x = generate_observations(lm, mu, rng);
        const double direct = log_likelihood(x, lm, mu);
        const double from_stats =
            log_likelihood_from_stats(sufficient_stats(x, lm), mu) + log_factorial_sum(x);
        CHECK(std::fabs(direct - from_stats) <= 1e-9 * std::fabs(direct));
    }
}

TEST_CASE("observation generation") {
    SUBCASE("zero rate produces zero counts") {
        LabelMatrix lm(5);
        Rng rng(1);
        const ObservationMatrix x = generate_observations(lm, RateParams{0.0, 5.0, 5.0}, rng);
        CHECK(x.total() == 0);
    }
    SUBCASE("sample mean approaches the rate") {
        const Vertex n = 160;  // ~12700 pairs
        LabelMatrix lm(n);
        for (std::uint64_t idx = 0; idx < lm.pair_count(); ++idx) lm.set_index(idx, 1);
        const double mu1 = 6.0;
        Rng rng(2);
        const ObservationMatrix x = generate_observations(lm, RateParams{0.1, mu1, 9.0}, rng);
        const double pairs = double(lm.pair_count());
        const double mean = double(x.total()) / pairs;
        const double se = std::sqrt(mu1 / pairs);
        CHECK(std::fabs(mean - mu1) < 3.0 * se);
    }
    SUBCASE("same seed same matrix, serial and parallel agree") {
        Hypergraph h(12);
        h.add_three_edge(VertexTriple(0, 1, 2));
        h.add_two_edge(VertexPair(3, 4));
        const LabelMatrix lm = project_labels(h);
        const RateParams mu{0.5, 3.0, 8.0};
        const ObservationMatrix a = generate_observations(lm, mu, Rng(42));
        const ObservationMatrix b = generate_observations(lm, mu, Rng(42));
        const ObservationMatrix c = generate_observations_parallel(lm, mu, Rng(42), 2);
        CHECK(a == b);
        CHECK(a == c);
        const ObservationMatrix d = generate_observations(lm, mu, Rng(43));
        CHECK(a != d);
    }
    SUBCASE("law of large numbers per label") {
        Hypergraph h(60);
        for (Vertex i = 0; i + 1 < 60; ++i)
            for (Vertex j = i + 1; j < 60; ++j)
                if ((i + j) % 3 == 0) h.add_two_edge(VertexPair(i, j));
        for (Vertex k = 0; k + 2 < 60; k += 3) h.add_three_edge(VertexTriple(k, k + 1, k + 2));
        const LabelMatrix lm = project_labels(h);
        const RateParams mu{0.2, 4.0, 9.0};
        const ObservationMatrix x = generate_observations(lm, mu, Rng(77));
        const SuffStats s = sufficient_stats(x, lm);
        const double rates[3] = {mu.mu0, mu.mu1, mu.mu2};
        for (int k = 0; k < 3; ++k) {
            REQUIRE(s.pair_count[k] > 0);
            const double mean = double(s.x_sum[k]) / double(s.pair_count[k]);
            const double se = std::sqrt(rates[k] / double(s.pair_count[k]));
            CHECK(std::fabs(mean - rates[k]) < 3.0 * se);
        }
    }
}

TEST_CASE("parallel kernels match the serial reference") {
    Rng rng(21);
    Hypergraph h(40);
    for (Vertex i = 0; i + 1 < 40; ++i)
        for (Vertex j = i + 1; j < 40; ++j)
            if (rng.uniform() < 0.2) h.add_two_edge(VertexPair(i, j));
    for (int t = 0; t < 30; ++t) {
        const Vertex a = Vertex(rng.uniform_int(40)), b = Vertex(rng.uniform_int(40)),
                     c = Vertex(rng.uniform_int(40));
        if (a != b && b != c && a != c) h.add_three_edge(VertexTriple(a, b, c));
    }
    const LabelMatrix lm = project_labels(h);
    const RateParams mu{0.3, 2.5, 6.0};
    const ObservationMatrix x = generate_observations(lm, mu, rng);

    CHECK(sufficient_stats(x, lm) == sufficient_stats_parallel(x, lm, 2));
    CHECK(log_likelihood(x, lm, mu) ==
          doctest::Approx(log_likelihood_parallel(x, lm, mu, 2)).epsilon(1e-12));
}
