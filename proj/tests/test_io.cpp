#include <doctest.h>

#include "hgr/generators.hpp"
#include "hgr/io.hpp"
#include "hgr/labels.hpp"
#include "hgr/likelihood.hpp"

using namespace hgr;

TEST_CASE("hypergraph text format round trip") {
    SUBCASE("empty structure") {
        const Hypergraph h(9);
        CHECK(io::hypergraph_from_string(io::hypergraph_to_string(h)) == h);
    }
    SUBCASE("randomized structures") {
        Rng rng(301);
        for (int rep = 0; rep < 1000; ++rep) {
            const Vertex n = Vertex(3 + rng.uniform_int(12));
            const Hypergraph h =
                random_hypergraph(n, 0.05 + 0.3 * rng.uniform(), 0.05 + 0.3 * rng.uniform(), rng);
            CHECK(io::hypergraph_from_string(io::hypergraph_to_string(h)) == h);
        }
    }
    SUBCASE("comments and blank lines are ignored") {
        const Hypergraph h = io::hypergraph_from_string(
            "# hello\n\nn 5\n# another comment\ne2 0 1\n\ne3 1 2 4\n");
        CHECK(h.n() == 5);
        CHECK(h.has_two_edge(VertexPair(0, 1)));
        CHECK(h.has_three_edge(VertexTriple(1, 2, 4)));
    }
    SUBCASE("malformed inputs carry line numbers") {
        CHECK_THROWS_AS(io::hypergraph_from_string("e2 0 1\n"), io::ParseError);
        CHECK_THROWS_AS(io::hypergraph_from_string("n 4\ne2 0\n"), io::ParseError);
        CHECK_THROWS_AS(io::hypergraph_from_string("n 4\ne2 0 9\n"), io::ParseError);
        CHECK_THROWS_AS(io::hypergraph_from_string("n 4\ne2 1 1\n"), io::ParseError);
        CHECK_THROWS_AS(io::hypergraph_from_string("n 4\nedge 0 1\n"), io::ParseError);
        CHECK_THROWS_AS(io::hypergraph_from_string(""), io::ParseError);
        try {
            io::hypergraph_from_string("n 4\ne2 0 1\ne2 0 1\n");
            FAIL("duplicate accepted");
        } catch (const io::ParseError& e) {
            CHECK(e.line == 3);
            CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        }
    }
}

TEST_CASE("observation CSV round trip") {
    SUBCASE("sparse encoding preserves every count") {
        Rng rng(302);
        for (int rep = 0; rep < 200; ++rep) {
            const Vertex n = Vertex(2 + rng.uniform_int(10));
            ObservationMatrix x(n);
            for (std::uint64_t idx = 0; idx < x.pair_count(); ++idx)
                if (rng.uniform() < 0.4) x.set_index(idx, std::int64_t(rng.uniform_int(100)));
            CHECK(io::observations_from_string(io::observations_to_string(x)) == x);
        }
    }
    SUBCASE("zeros are implicit") {
        ObservationMatrix x(4);
        x.set(1, 3, 7);
        const std::string text = io::observations_to_string(x);
        CHECK(text.find("1,3,7") != std::string::npos);
        CHECK(text.find("0,1") == std::string::npos);
    }
    SUBCASE("malformed inputs") {
        CHECK_THROWS_AS(io::observations_from_string("i,j,count\n0,1,2\n"), io::ParseError);
        CHECK_THROWS_AS(io::observations_from_string("# n=4\n0,1,2\n"), io::ParseError);
        CHECK_THROWS_AS(io::observations_from_string("# n=4\ni,j,count\n1,0,2\n"),
                        io::ParseError);
        CHECK_THROWS_AS(io::observations_from_string("# n=4\ni,j,count\n0,1,-2\n"),
                        io::ParseError);
        CHECK_THROWS_AS(io::observations_from_string("# n=4\ni,j,count\n0,1,2\n0,1,3\n"),
                        io::ParseError);
        CHECK_THROWS_AS(io::observations_from_string("# n=4\ni,j,count\n0,5,2\n"),
                        io::ParseError);
    }
}

TEST_CASE("bipartite CSV") {
    const auto records = io::bipartite_from_string("entity,group\na,g1\nb,g1\n# note\nc,g2\n");
    REQUIRE(records.size() == 3);
    CHECK(records[0].entity == "a");
    CHECK(records[0].group == "g1");
    CHECK_THROWS_AS(io::bipartite_from_string("a,g1\n"), io::ParseError);
    CHECK_THROWS_AS(io::bipartite_from_string("entity,group\na\n"), io::ParseError);
}

TEST_CASE("run config JSON round trip") {
    io::RunConfig cfg;
    cfg.model = ModelKind::categorical;
    cfg.init = InitMode::ground_truth;
    cfg.mcmc.eta = 0.4;
    cfg.mcmc.iter_min = 1000;
    cfg.mcmc.iter_max = 5000;
    cfg.mcmc.window_w = 100;
    cfg.mcmc.master_seed = 99;
    cfg.true_mu = RateParams{0.01, 20.0, 30.0};

    const auto j = io::run_config_to_json(cfg);
    const io::RunConfig back = io::run_config_from_json(j);
    CHECK(back.model == cfg.model);
    CHECK(back.init == cfg.init);
    CHECK(back.mcmc == cfg.mcmc);
    CHECK(back.true_mu == cfg.true_mu);
    CHECK(io::config_hash(back) == io::config_hash(cfg));

    io::RunConfig other = cfg;
    other.mcmc.master_seed = 100;
    CHECK(io::config_hash(other) != io::config_hash(cfg));

    CHECK_THROWS_AS(io::run_config_from_json(nlohmann::json{{"model", "nonsense"}}),
                    io::ParseError);
    CHECK_THROWS_AS(
        io::run_config_from_json(nlohmann::json{{"mcmc", {{"eta", 2.0}}}}),
        std::invalid_argument);
}

TEST_CASE("result bundle JSON round trip") {
    Rng rng(303);
    Hypergraph h(6);
    h.add_two_edge(VertexPair(0, 1));
    h.add_three_edge(VertexTriple(2, 3, 4));
    const RateParams mu{0.1, 4.0, 9.0};
    const ObservationMatrix x = generate_observations(project_labels(h), mu, rng);

    io::ResultBundle bundle;
    bundle.config.model = ModelKind::hypergraph;
    bundle.config.mcmc.master_seed = 3;
    bundle.observations = x;
    bundle.trace.converged = true;
    bundle.trace.converged_at = 1234;
    bundle.trace.loglik_history = {-10.0, -9.5, -9.0};
    PosteriorSample s;
    s.structure = h;
    s.mu = mu;
    s.probs = StructureProbs(HypergraphProbs{0.2, 0.05});
    s.log_joint = -42.5;
    s.log_likelihood = -40.25;
    bundle.trace.samples.push_back(s);

    const auto j = io::result_bundle_to_json(bundle);
    const io::ResultBundle back = io::result_bundle_from_json(j);
    CHECK(back.observations == x);
    CHECK(back.trace.converged);
    CHECK(back.trace.converged_at == 1234);
    CHECK(back.trace.loglik_history == bundle.trace.loglik_history);
    REQUIRE(back.trace.samples.size() == 1);
    CHECK(back.trace.samples[0].hypergraph() == h);
    CHECK(back.trace.samples[0].mu == mu);
    CHECK(back.trace.samples[0].log_joint == -42.5);
    CHECK(back.trace.samples[0].probs.hypergraph().q == 0.2);
    CHECK(j.at("provenance").at("config_hash") == io::config_hash(bundle.config));
}
