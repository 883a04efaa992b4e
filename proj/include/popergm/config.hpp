#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "popergm/conjugate.hpp"
#include "popergm/engine.hpp"
#include "popergm/model.hpp"

namespace popergm {

/// One group of a simulation study: n networks with theta ~ N(mu, sigma).
struct GroupDesign {
    int n = 0;
    Vector mu;
    Matrix sigma;
    bool operator==(const GroupDesign&) const = default;
};

struct SimulateSettings {
    int n_nodes = 30;
    /// "hemispheres" (two halves, attribute "hemisphere") or "none".
    std::string design = "hemispheres";
    std::vector<GroupDesign> groups;
    /// Toggle proposals from the empty graph; 0 selects 20 per dyad.
    std::int64_t iterations = 0;
    /// Extra leading toggles; negative selects 100 per dyad.
    std::int64_t burn_in = -1;
    bool operator==(const SimulateSettings&) const = default;
};

struct GofSettings {
    int draws = 100;
    std::vector<double> levels{0.9, 0.95};
    std::int64_t iterations = 0;
    std::int64_t burn_in = -1;
    bool operator==(const GofSettings&) const = default;
};

struct IngestSettings {
    std::string manifest;
    double target_mean_degree = 3.0;
    bool per_network = false;
    bool absolute = false;
    std::string covariates;
    bool operator==(const IngestSettings&) const = default;
};

struct McmcSettings {
    int iterations = 12000;
    int burn_in = 2000;
    int thin = 1;
    int theta_thin = 10;
    int adapt_window = 1000;
    int adapt_interval = 20;
    double beta = 0.05;
    double initial_scale = 1.0;
    bool literal_adaptation = false;
    std::int64_t aux_iterations = 0;
    bool interweave = true;
    bool per_group_sigma_theta = false;
    std::string init = "zeros";
    bool operator==(const McmcSettings&) const = default;
};

/// Everything a CLI run needs; parsed from a nested JSON document.
struct RunConfig {
    std::vector<std::string> terms;
    Hyperpriors hyperpriors;
    McmcSettings mcmc;
    std::string manifest;
    std::string covariates;
    SimulateSettings simulate;
    GofSettings gof;
    IngestSettings ingest;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string output = "out";

    ModelSpec model_spec() const { return ModelSpec::parse(terms); }
    ChainSettings chain_settings() const;
    bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError on malformed or inconsistent documents. Missing
/// hyperprior entries take their defaults for the model dimension.
RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json serialize_config(const RunConfig& config);
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Applies PREFIX<KEY>[__<KEY>...]=value overrides from the environment;
/// keys are lower-cased and "__" separates nesting levels. Values are parsed
/// as JSON when possible and kept as strings otherwise.
void apply_env_overrides(nlohmann::json& doc, const std::string& prefix, char** environ_begin);

/// 64-bit FNV-1a of the serialised config (workers and output excluded),
/// as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace popergm
