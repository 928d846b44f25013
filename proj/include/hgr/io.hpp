#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hgr/distributions.hpp"
#include "hgr/generators.hpp"
#include "hgr/inference.hpp"
#include "hgr/mcmc.hpp"
#include "hgr/types.hpp"

namespace hgr::io {

inline constexpr const char* kLibraryVersion = "hgr 1.0.0";
inline constexpr int kFormatVersion = 1;

// Parse failure with a 1-based line number (0 when not line-addressable).
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_number, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
    explicit ParseError(const std::string& message) : std::runtime_error(message), line(0) {}
};

// --- hypergraph text format -------------------------------------------------
// "# ..." comments, a header "n <count>", then "e2 i j" / "e3 i j k" lines
// with 0-based sorted indices. Serialization is canonical, so
// parse(serialize(h)) == h exactly.
std::string hypergraph_to_string(const Hypergraph& h);
Hypergraph hypergraph_from_string(const std::string& text);
void write_hypergraph(const Hypergraph& h, const std::string& path);
Hypergraph read_hypergraph(const std::string& path);

// --- observation CSV ----------------------------------------------------------
// "# n=<count>" comment, header "i,j,count", one row per nonzero pair.
std::string observations_to_string(const ObservationMatrix& x);
ObservationMatrix observations_from_string(const std::string& text);
void write_observations(const ObservationMatrix& x, const std::string& path);
ObservationMatrix read_observations(const std::string& path);

// --- bipartite edge list ------------------------------------------------------
// CSV with header "entity,group".
std::vector<BipartiteRecord> bipartite_from_string(const std::string& text);
std::vector<BipartiteRecord> read_bipartite_csv(const std::string& path);

// --- run configuration -------------------------------------------------------
struct RunConfig {
    ModelKind model = ModelKind::hypergraph;
    InitMode init = InitMode::from_data;
    McmcConfig mcmc;
    dist::Hyperparams hyperparams;
    std::optional<RateParams> true_mu;  // generating rates, for ground-truth init

    void validate() const {
        mcmc.validate();
        hyperparams.validate();
    }
};

nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig read_run_config(const std::string& path);
std::string config_hash(const RunConfig& cfg);  // FNV-1a of the canonical dump

// --- result bundle -------------------------------------------------------------
struct ResultBundle {
    RunConfig config;
    ObservationMatrix observations;
    ChainTrace trace;
    std::uint64_t loglik_stride = 1;  // downsampling step of the stored trace
    std::string version = kLibraryVersion;
};

nlohmann::json result_bundle_to_json(const ResultBundle& bundle,
                                     std::size_t max_trace_points = 2000);
ResultBundle result_bundle_from_json(const nlohmann::json& j);
void write_result_bundle(const ResultBundle& bundle, const std::string& path,
                         std::size_t max_trace_points = 2000);
ResultBundle read_result_bundle(const std::string& path);

// Generic helpers.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hgr::io
