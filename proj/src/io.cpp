#include "hgr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hgr/labels.hpp"

namespace hgr::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

template <typename T>
T parse_int(const std::string& token, int line, const char* what) {
    T value{};
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string("invalid ") + what + " '" + token + "'");
    return value;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

// --- hypergraph text format -------------------------------------------------

std::string hypergraph_to_string(const Hypergraph& h) {
    std::ostringstream out;
    out << "# format_version " << kFormatVersion << "\n";
    out << "n " << h.n() << "\n";
    for (const auto& e : h.sorted_two_edges()) out << "e2 " << e.a << " " << e.b << "\n";
    for (const auto& t : h.sorted_three_edges())
        out << "e3 " << t.a << " " << t.b << " " << t.c << "\n";
    return out.str();
}

Hypergraph hypergraph_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::optional<Hypergraph> h;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto tokens = split(line, ' ');
        if (tokens[0] == "n") {
            if (h) throw ParseError(line_no, "duplicate header");
            if (tokens.size() != 2) throw ParseError(line_no, "malformed header");
            const auto n = parse_int<std::int64_t>(tokens[1], line_no, "vertex count");
            if (n <= 0) throw ParseError(line_no, "vertex count must be positive");
            h.emplace(Vertex(n));
            continue;
        }
        if (!h) throw ParseError(line_no, "edge record before the 'n' header");
        try {
            if (tokens[0] == "e2") {
                if (tokens.size() != 3) throw ParseError(line_no, "malformed 2-edge record");
                const auto i = parse_int<std::uint32_t>(tokens[1], line_no, "vertex");
                const auto j = parse_int<std::uint32_t>(tokens[2], line_no, "vertex");
                if (!h->add_two_edge(VertexPair(i, j)))
                    throw ParseError(line_no, "duplicate 2-edge");
            } else if (tokens[0] == "e3") {
                if (tokens.size() != 4) throw ParseError(line_no, "malformed 3-edge record");
                const auto i = parse_int<std::uint32_t>(tokens[1], line_no, "vertex");
                const auto j = parse_int<std::uint32_t>(tokens[2], line_no, "vertex");
                const auto k = parse_int<std::uint32_t>(tokens[3], line_no, "vertex");
                if (!h->add_three_edge(VertexTriple(i, j, k)))
                    throw ParseError(line_no, "duplicate 3-edge");
            } else {
                throw ParseError(line_no, "unknown record '" + tokens[0] + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        } catch (const std::out_of_range& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!h) throw ParseError("missing 'n' header");
    return *h;
}

void write_hypergraph(const Hypergraph& h, const std::string& path) {
    write_text_file(path, hypergraph_to_string(h));
}

Hypergraph read_hypergraph(const std::string& path) {
    try {
        return hypergraph_from_string(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line, path + ": " + e.what());
    }
}

// --- observation CSV ----------------------------------------------------------

std::string observations_to_string(const ObservationMatrix& x) {
    std::ostringstream out;
    out << "# format_version " << kFormatVersion << "\n";
    out << "# n=" << x.n() << "\n";
    out << "i,j,count\n";
    std::uint32_t idx = 0;
    for (Vertex i = 0; i + 1 < x.n(); ++i)
        for (Vertex j = i + 1; j < x.n(); ++j, ++idx)
            if (x.at_index(idx) != 0)
                out << i << "," << j << "," << x.at_index(idx) << "\n";
    return out.str();
}

ObservationMatrix observations_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::optional<ObservationMatrix> x;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = strip(line.substr(1));
            if (body.rfind("n=", 0) == 0) {
                if (x) throw ParseError(line_no, "duplicate n declaration");
                const auto n = parse_int<std::int64_t>(body.substr(2), line_no, "vertex count");
                if (n <= 0) throw ParseError(line_no, "vertex count must be positive");
                x.emplace(Vertex(n));
            }
            continue;
        }
        if (!header_seen) {
            if (line != "i,j,count") throw ParseError(line_no, "expected header 'i,j,count'");
            if (!x) throw ParseError(line_no, "missing '# n=<count>' declaration");
            header_seen = true;
            continue;
        }
        const auto tokens = split(line, ',');
        if (tokens.size() != 3) throw ParseError(line_no, "expected 'i,j,count'");
        const auto i = parse_int<std::uint32_t>(strip(tokens[0]), line_no, "vertex");
        const auto j = parse_int<std::uint32_t>(strip(tokens[1]), line_no, "vertex");
        const auto c = parse_int<std::int64_t>(strip(tokens[2]), line_no, "count");
        if (i >= j) throw ParseError(line_no, "rows must satisfy i < j");
        if (c < 0) throw ParseError(line_no, "counts must be non-negative");
        try {
            if (x->at(i, j) != 0) throw ParseError(line_no, "duplicate pair record");
            x->set(i, j, c);
        } catch (const std::out_of_range& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!x) throw ParseError("missing '# n=<count>' declaration");
    if (!header_seen) throw ParseError("missing 'i,j,count' header");
    return *x;
}

void write_observations(const ObservationMatrix& x, const std::string& path) {
    write_text_file(path, observations_to_string(x));
}

ObservationMatrix read_observations(const std::string& path) {
    try {
        return observations_from_string(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line, path + ": " + e.what());
    }
}

// --- bipartite edge list ------------------------------------------------------

std::vector<BipartiteRecord> bipartite_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool header_seen = false;
    std::vector<BipartiteRecord> out;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip(raw);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "entity,group") throw ParseError(line_no, "expected header 'entity,group'");
            header_seen = true;
            continue;
        }
        const auto tokens = split(line, ',');
        if (tokens.size() != 2) throw ParseError(line_no, "expected 'entity,group'");
        BipartiteRecord r{strip(tokens[0]), strip(tokens[1])};
        if (r.entity.empty() || r.group.empty()) throw ParseError(line_no, "empty field");
        out.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError("missing 'entity,group' header");
    return out;
}

std::vector<BipartiteRecord> read_bipartite_csv(const std::string& path) {
    try {
        return bipartite_from_string(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line, path + ": " + e.what());
    }
}

// --- run configuration -------------------------------------------------------

nlohmann::json run_config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["model"] = model_name(cfg.model);
    j["init"] = cfg.init == InitMode::ground_truth ? "truth" : "data";
    j["mcmc"] = {{"eta", cfg.mcmc.eta},
                 {"nu2", cfg.mcmc.nu2},
                 {"nu3", cfg.mcmc.nu3},
                 {"chi0", cfg.mcmc.chi0},
                 {"chi1", cfg.mcmc.chi1},
                 {"window_w", cfg.mcmc.window_w},
                 {"tol_delta", cfg.mcmc.tol_delta},
                 {"iter_min", cfg.mcmc.iter_min},
                 {"iter_max", cfg.mcmc.iter_max},
                 {"n_chains", cfg.mcmc.n_chains},
                 {"sample_stride", cfg.mcmc.sample_stride},
                 {"n_samples", cfg.mcmc.n_samples},
                 {"master_seed", cfg.mcmc.master_seed},
                 {"proposals_per_sweep", cfg.mcmc.proposals_per_sweep}};
    j["hyperparams"] = {{"xi", cfg.hyperparams.xi},
                        {"zeta", cfg.hyperparams.zeta},
                        {"alpha", {cfg.hyperparams.alpha[0], cfg.hyperparams.alpha[1],
                                   cfg.hyperparams.alpha[2]}},
                        {"beta", {cfg.hyperparams.beta[0], cfg.hyperparams.beta[1],
                                  cfg.hyperparams.beta[2]}}};
    if (cfg.true_mu)
        j["true_mu"] = {cfg.true_mu->mu0, cfg.true_mu->mu1, cfg.true_mu->mu2};
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        if (j.contains("model")) {
            const std::string m = j.at("model").get<std::string>();
            if (m == "hypergraph") cfg.model = ModelKind::hypergraph;
            else if (m == "categorical") cfg.model = ModelKind::categorical;
            else throw ParseError("unknown model '" + m + "'");
        }
        if (j.contains("init")) {
            const std::string m = j.at("init").get<std::string>();
            if (m == "truth") cfg.init = InitMode::ground_truth;
            else if (m == "data") cfg.init = InitMode::from_data;
            else throw ParseError("unknown init mode '" + m + "'");
        }
        if (j.contains("mcmc")) {
            const auto& m = j.at("mcmc");
            auto get = [&](const char* key, auto& field) {
                if (m.contains(key)) field = m.at(key).get<std::decay_t<decltype(field)>>();
            };
            get("eta", cfg.mcmc.eta);
            get("nu2", cfg.mcmc.nu2);
            get("nu3", cfg.mcmc.nu3);
            get("chi0", cfg.mcmc.chi0);
            get("chi1", cfg.mcmc.chi1);
            get("window_w", cfg.mcmc.window_w);
            get("tol_delta", cfg.mcmc.tol_delta);
            get("iter_min", cfg.mcmc.iter_min);
            get("iter_max", cfg.mcmc.iter_max);
            get("n_chains", cfg.mcmc.n_chains);
            get("sample_stride", cfg.mcmc.sample_stride);
            get("n_samples", cfg.mcmc.n_samples);
            get("master_seed", cfg.mcmc.master_seed);
            get("proposals_per_sweep", cfg.mcmc.proposals_per_sweep);
        }
        if (j.contains("hyperparams")) {
            const auto& hjson = j.at("hyperparams");
            if (hjson.contains("xi")) cfg.hyperparams.xi = hjson.at("xi").get<double>();
            if (hjson.contains("zeta")) cfg.hyperparams.zeta = hjson.at("zeta").get<double>();
            if (hjson.contains("alpha"))
                for (int k = 0; k < 3; ++k)
                    cfg.hyperparams.alpha[k] = hjson.at("alpha").at(k).get<double>();
            if (hjson.contains("beta"))
                for (int k = 0; k < 3; ++k)
                    cfg.hyperparams.beta[k] = hjson.at("beta").at(k).get<double>();
        }
        if (j.contains("true_mu")) {
            RateParams mu;
            mu.mu0 = j.at("true_mu").at(0).get<double>();
            mu.mu1 = j.at("true_mu").at(1).get<double>();
            mu.mu2 = j.at("true_mu").at(2).get<double>();
            cfg.true_mu = mu;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig read_run_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return run_config_from_json(j);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string dump = run_config_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// --- result bundle -------------------------------------------------------------

namespace {

nlohmann::json structure_to_json(const std::variant<Hypergraph, CategoricalGraph>& s) {
    nlohmann::json j;
    if (std::holds_alternative<Hypergraph>(s)) {
        const auto& h = std::get<Hypergraph>(s);
        j["kind"] = "hypergraph";
        j["n"] = h.n();
        auto& e2 = j["e2"] = nlohmann::json::array();
        for (const auto& e : h.sorted_two_edges()) e2.push_back({e.a, e.b});
        auto& e3 = j["e3"] = nlohmann::json::array();
        for (const auto& t : h.sorted_three_edges()) e3.push_back({t.a, t.b, t.c});
    } else {
        const auto& g = std::get<CategoricalGraph>(s);
        j["kind"] = "categorical";
        j["n"] = g.n();
        auto& weak = j["weak"] = nlohmann::json::array();
        for (const auto& e : g.sorted_weak_edges()) weak.push_back({e.a, e.b});
        auto& strong = j["strong"] = nlohmann::json::array();
        for (const auto& e : g.sorted_strong_edges()) strong.push_back({e.a, e.b});
    }
    return j;
}

std::variant<Hypergraph, CategoricalGraph> structure_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const Vertex n = j.at("n").get<Vertex>();
    if (kind == "hypergraph") {
        Hypergraph h(n);
        for (const auto& e : j.at("e2"))
            h.add_two_edge(VertexPair(e.at(0).get<Vertex>(), e.at(1).get<Vertex>()));
        for (const auto& t : j.at("e3"))
            h.add_three_edge(VertexTriple(t.at(0).get<Vertex>(), t.at(1).get<Vertex>(),
                                          t.at(2).get<Vertex>()));
        return h;
    }
    if (kind != "categorical") throw ParseError("unknown structure kind '" + kind + "'");
    CategoricalGraph g(n);
    for (const auto& e : j.at("weak"))
        g.add_weak_edge(VertexPair(e.at(0).get<Vertex>(), e.at(1).get<Vertex>()));
    for (const auto& e : j.at("strong"))
        g.add_strong_edge(VertexPair(e.at(0).get<Vertex>(), e.at(1).get<Vertex>()));
    return g;
}

nlohmann::json probs_to_json(const StructureProbs& p) {
    if (p.kind() == ModelKind::hypergraph)
        return {{"q", p.hypergraph().q}, {"p", p.hypergraph().p}};
    return {{"q1", p.categorical().q1}, {"q2", p.categorical().q2}};
}

StructureProbs probs_from_json(const nlohmann::json& j) {
    if (j.contains("q")) return StructureProbs(HypergraphProbs{j.at("q"), j.at("p")});
    return StructureProbs(CategoricalProbs{j.at("q1"), j.at("q2")});
}

}  // namespace

nlohmann::json result_bundle_to_json(const ResultBundle& bundle,
                                     std::size_t max_trace_points) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["provenance"] = {{"version", bundle.version},
                       {"rng", std::string(Rng::kName) + " v" + std::to_string(Rng::kVersion)},
                       {"config", run_config_to_json(bundle.config)},
                       {"config_hash", config_hash(bundle.config)},
                       {"seed", bundle.config.mcmc.master_seed}};

    // Observations, sparse.
    nlohmann::json counts = nlohmann::json::array();
    const auto& x = bundle.observations;
    std::uint32_t idx = 0;
    for (Vertex i = 0; i + 1 < x.n(); ++i)
        for (Vertex j2 = i + 1; j2 < x.n(); ++j2, ++idx)
            if (x.at_index(idx) != 0) counts.push_back({i, j2, x.at_index(idx)});
    j["observations"] = {{"n", x.n()}, {"counts", std::move(counts)}};

    // Trace: status plus a downsampled log-likelihood series.
    const auto& hist = bundle.trace.loglik_history;
    std::uint64_t stride = 1;
    if (!hist.empty() && hist.size() > max_trace_points)
        stride = (hist.size() + max_trace_points - 1) / max_trace_points;
    nlohmann::json ll = nlohmann::json::array();
    for (std::size_t i = 0; i < hist.size(); i += stride) ll.push_back(hist[i]);
    j["trace"] = {{"converged", bundle.trace.converged},
                  {"converged_at", bundle.trace.converged_at
                                       ? nlohmann::json(*bundle.trace.converged_at)
                                       : nlohmann::json()},
                  {"accepted_moves", bundle.trace.accepted_moves},
                  {"total_proposals", bundle.trace.total_proposals},
                  {"seed", bundle.trace.seed},
                  {"loglik_stride", stride},
                  {"loglik", std::move(ll)}};

    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : bundle.trace.samples) {
        samples.push_back({{"structure", structure_to_json(s.structure)},
                           {"mu", {s.mu.mu0, s.mu.mu1, s.mu.mu2}},
                           {"probs", probs_to_json(s.probs)},
                           {"log_joint", s.log_joint},
                           {"log_likelihood", s.log_likelihood}});
    }
    j["samples"] = std::move(samples);
    return j;
}

ResultBundle result_bundle_from_json(const nlohmann::json& j) {
    ResultBundle bundle;
    try {
        bundle.config = run_config_from_json(j.at("provenance").at("config"));
        bundle.version = j.at("provenance").at("version").get<std::string>();

        const auto& obs = j.at("observations");
        ObservationMatrix x(obs.at("n").get<Vertex>());
        for (const auto& row : obs.at("counts"))
            x.set(row.at(0).get<Vertex>(), row.at(1).get<Vertex>(),
                  row.at(2).get<std::int64_t>());
        bundle.observations = std::move(x);

        const auto& trace = j.at("trace");
        bundle.trace.converged = trace.at("converged").get<bool>();
        if (!trace.at("converged_at").is_null())
            bundle.trace.converged_at = trace.at("converged_at").get<std::uint64_t>();
        bundle.trace.accepted_moves = trace.at("accepted_moves").get<std::uint64_t>();
        bundle.trace.total_proposals = trace.at("total_proposals").get<std::uint64_t>();
        bundle.trace.seed = trace.at("seed").get<std::uint64_t>();
        bundle.loglik_stride = trace.at("loglik_stride").get<std::uint64_t>();
        for (const auto& v : trace.at("loglik"))
            bundle.trace.loglik_history.push_back(v.get<double>());

        for (const auto& sj : j.at("samples")) {
            PosteriorSample s;
            s.structure = structure_from_json(sj.at("structure"));
            s.mu.mu0 = sj.at("mu").at(0).get<double>();
            s.mu.mu1 = sj.at("mu").at(1).get<double>();
            s.mu.mu2 = sj.at("mu").at(2).get<double>();
            s.probs = probs_from_json(sj.at("probs"));
            s.log_joint = sj.at("log_joint").get<double>();
            s.log_likelihood = sj.at("log_likelihood").get<double>();
            bundle.trace.samples.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("result bundle: ") + e.what());
    }
    return bundle;
}

void write_result_bundle(const ResultBundle& bundle, const std::string& path,
                         std::size_t max_trace_points) {
    write_text_file(path, result_bundle_to_json(bundle, max_trace_points).dump(2) + "\n");
}

ResultBundle read_result_bundle(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return result_bundle_from_json(j);
}

}  // namespace hgr::io
