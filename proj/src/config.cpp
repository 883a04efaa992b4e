#include "popergm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "popergm/error.hpp"

namespace popergm {

using nlohmann::json;

namespace {

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row(std::size_t(m.cols()));
        for (Eigen::Index c = 0; c < m.cols(); ++c) row[std::size_t(c)] = m(r, c);
        rows.push_back(row);
    }
    return rows;
}

Vector parse_vector(const json& j, const std::string& what) {
    if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
    Vector v(Eigen::Index(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_number()) throw ConfigError(what + " must be an array of numbers");
        v[Eigen::Index(k)] = j[k].get<double>();
    }
    return v;
}

Matrix parse_matrix(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(Eigen::Index(n), Eigen::Index(j[0].size()));
    for (std::size_t r = 0; r < n; ++r) {
        Vector row = parse_vector(j[r], what);
        if (row.size() != m.cols()) throw ConfigError(what + " has ragged rows");
        m.row(Eigen::Index(r)) = row.transpose();
    }
    return m;
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& section) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + "." + key + " has the wrong type");
    }
}

const json& section(const json& doc, const char* key) {
    static const json empty = json::object();
    if (!doc.contains(key)) return empty;
    if (!doc.at(key).is_object()) throw ConfigError(std::string(key) + " must be an object");
    return doc.at(key);
}

}  // namespace

ChainSettings RunConfig::chain_settings() const {
    ChainSettings s;
    s.iterations = mcmc.iterations;
    s.burn_in = mcmc.burn_in;
    s.thin = mcmc.thin;
    s.theta_thin = mcmc.theta_thin;
    s.adaptation.window = mcmc.adapt_window;
    s.adaptation.interval = mcmc.adapt_interval;
    s.adaptation.beta = mcmc.beta;
    s.adaptation.initial_scale = mcmc.initial_scale;
    s.adaptation.literal_direction = mcmc.literal_adaptation;
    s.aux.aux_iterations = mcmc.aux_iterations;
    s.interweave = mcmc.interweave;
    s.per_group_sigma_theta = mcmc.per_group_sigma_theta;
    s.init = mcmc.init == "mple" ? ThetaInit::mple : ThetaInit::zeros;
    s.workers = workers;
    s.seed = seed;
    return s;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;

    const json& model = section(doc, "model");
    read(model, "terms", cfg.terms, "model");
    if (cfg.terms.empty()) throw ConfigError("model.terms must list at least one term");
    ModelSpec spec;
    try {
        spec = cfg.model_spec();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const int p = spec.dimension();

    cfg.hyperpriors = Hyperpriors::defaults(p);
    const json& hp = section(doc, "hyperpriors");
    if (hp.contains("mu0")) cfg.hyperpriors.mu0 = parse_vector(hp["mu0"], "hyperpriors.mu0");
    if (hp.contains("lambda")) cfg.hyperpriors.lambda = parse_matrix(hp["lambda"], "hyperpriors.lambda");
    if (hp.contains("psi_theta")) cfg.hyperpriors.psi_theta = parse_matrix(hp["psi_theta"], "hyperpriors.psi_theta");
    if (hp.contains("psi_mu")) cfg.hyperpriors.psi_mu = parse_matrix(hp["psi_mu"], "hyperpriors.psi_mu");
    read(hp, "nu_theta", cfg.hyperpriors.nu_theta, "hyperpriors");
    read(hp, "nu_mu", cfg.hyperpriors.nu_mu, "hyperpriors");
    if (cfg.hyperpriors.dimension() != p) throw ConfigError("hyperpriors.mu0 length must equal the number of terms");
    cfg.hyperpriors.validate();

    const json& mc = section(doc, "mcmc");
    auto& m = cfg.mcmc;
    read(mc, "iterations", m.iterations, "mcmc");
    read(mc, "burn_in", m.burn_in, "mcmc");
    read(mc, "thin", m.thin, "mcmc");
    read(mc, "theta_thin", m.theta_thin, "mcmc");
    read(mc, "adapt_window", m.adapt_window, "mcmc");
    read(mc, "adapt_interval", m.adapt_interval, "mcmc");
    read(mc, "beta", m.beta, "mcmc");
    read(mc, "initial_scale", m.initial_scale, "mcmc");
    read(mc, "literal_adaptation", m.literal_adaptation, "mcmc");
    read(mc, "aux_iterations", m.aux_iterations, "mcmc");
    read(mc, "interweave", m.interweave, "mcmc");
    read(mc, "per_group_sigma_theta", m.per_group_sigma_theta, "mcmc");
    read(mc, "init", m.init, "mcmc");
    if (m.init != "zeros" && m.init != "mple") throw ConfigError("mcmc.init must be 'zeros' or 'mple'");

    const json& data = section(doc, "data");
    read(data, "manifest", cfg.manifest, "data");
    read(data, "covariates", cfg.covariates, "data");

    const json& sim = section(doc, "simulate");
    auto& s = cfg.simulate;
    read(sim, "nodes", s.n_nodes, "simulate");
    read(sim, "design", s.design, "simulate");
    read(sim, "iterations", s.iterations, "simulate");
    read(sim, "burn_in", s.burn_in, "simulate");
    if (s.design != "hemispheres" && s.design != "none") throw ConfigError("simulate.design must be 'hemispheres' or 'none'");
    if (s.n_nodes < 2) throw ConfigError("simulate.nodes must be >= 2");
    if (sim.contains("groups")) {
        if (!sim["groups"].is_array()) throw ConfigError("simulate.groups must be an array");
        for (const auto& g : sim["groups"]) {
            GroupDesign d;
            read(g, "n", d.n, "simulate.groups");
            if (d.n < 0) throw ConfigError("simulate.groups[].n must be >= 0");
            if (!g.contains("mu") || !g.contains("sigma")) throw ConfigError("simulate.groups[] needs mu and sigma");
            d.mu = parse_vector(g["mu"], "simulate.groups[].mu");
            d.sigma = parse_matrix(g["sigma"], "simulate.groups[].sigma");
            if (d.mu.size() != p || d.sigma.rows() != p || d.sigma.cols() != p)
                throw ConfigError("simulate.groups[] mu/sigma dimensions must match the model");
            s.groups.push_back(std::move(d));
        }
    }

    const json& gof = section(doc, "gof");
    read(gof, "draws", cfg.gof.draws, "gof");
    read(gof, "levels", cfg.gof.levels, "gof");
    read(gof, "iterations", cfg.gof.iterations, "gof");
    read(gof, "burn_in", cfg.gof.burn_in, "gof");
    if (cfg.gof.draws < 1) throw ConfigError("gof.draws must be >= 1");
    for (double l : cfg.gof.levels)
        if (!(l > 0.0 && l < 1.0)) throw ConfigError("gof.levels must lie in (0, 1)");

    const json& ing = section(doc, "ingest");
    read(ing, "manifest", cfg.ingest.manifest, "ingest");
    read(ing, "target_mean_degree", cfg.ingest.target_mean_degree, "ingest");
    read(ing, "per_network", cfg.ingest.per_network, "ingest");
    read(ing, "absolute", cfg.ingest.absolute, "ingest");
    read(ing, "covariates", cfg.ingest.covariates, "ingest");

    read(doc, "seed", cfg.seed, "config");
    read(doc, "workers", cfg.workers, "config");
    read(doc, "output", cfg.output, "config");
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");

    cfg.chain_settings().validate();
    return cfg;
}

json serialize_config(const RunConfig& cfg) {
    json doc;
    doc["model"]["terms"] = cfg.terms;
    const auto& h = cfg.hyperpriors;
    doc["hyperpriors"] = {{"mu0", vector_json(h.mu0)},           {"lambda", matrix_json(h.lambda)},
                          {"nu_theta", h.nu_theta},              {"psi_theta", matrix_json(h.psi_theta)},
                          {"nu_mu", h.nu_mu},                    {"psi_mu", matrix_json(h.psi_mu)}};
    const auto& m = cfg.mcmc;
    doc["mcmc"] = {{"iterations", m.iterations},
                   {"burn_in", m.burn_in},
                   {"thin", m.thin},
                   {"theta_thin", m.theta_thin},
                   {"adapt_window", m.adapt_window},
                   {"adapt_interval", m.adapt_interval},
                   {"beta", m.beta},
                   {"initial_scale", m.initial_scale},
                   {"literal_adaptation", m.literal_adaptation},
                   {"aux_iterations", m.aux_iterations},
                   {"interweave", m.interweave},
                   {"per_group_sigma_theta", m.per_group_sigma_theta},
                   {"init", m.init}};
    doc["data"] = {{"manifest", cfg.manifest}, {"covariates", cfg.covariates}};
    json groups = json::array();
    for (const auto& g : cfg.simulate.groups)
        groups.push_back({{"n", g.n}, {"mu", vector_json(g.mu)}, {"sigma", matrix_json(g.sigma)}});
    doc["simulate"] = {{"nodes", cfg.simulate.n_nodes},
                       {"design", cfg.simulate.design},
                       {"groups", groups},
                       {"iterations", cfg.simulate.iterations},
                       {"burn_in", cfg.simulate.burn_in}};
    doc["gof"] = {{"draws", cfg.gof.draws},
                  {"levels", cfg.gof.levels},
                  {"iterations", cfg.gof.iterations},
                  {"burn_in", cfg.gof.burn_in}};
    doc["ingest"] = {{"manifest", cfg.ingest.manifest},
                     {"target_mean_degree", cfg.ingest.target_mean_degree},
                     {"per_network", cfg.ingest.per_network},
                     {"absolute", cfg.ingest.absolute},
                     {"covariates", cfg.ingest.covariates}};
    doc["seed"] = cfg.seed;
    doc["workers"] = cfg.workers;
    doc["output"] = cfg.output;
    return doc;
}

json load_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

void apply_env_overrides(json& doc, const std::string& prefix, char** env) {
    if (!env) return;
    for (char** e = env; *e; ++e) {
        std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0) continue;
        auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string key = entry.substr(prefix.size(), eq - prefix.size());
        std::string value = entry.substr(eq + 1);
        std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return char(std::tolower(c)); });
        std::vector<std::string> path;
        for (std::size_t start = 0;;) {
            auto sep = key.find("__", start);
            path.push_back(key.substr(start, sep == std::string::npos ? std::string::npos : sep - start));
            if (sep == std::string::npos) break;
            start = sep + 2;
        }
        if (std::any_of(path.begin(), path.end(), [](const std::string& s) { return s.empty(); })) continue;
        json* node = &doc;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            if (!node->contains(path[k]) || !(*node)[path[k]].is_object()) (*node)[path[k]] = json::object();
            node = &(*node)[path[k]];
        }
        json parsed = json::parse(value, nullptr, false);
        (*node)[path.back()] = parsed.is_discarded() ? json(value) : parsed;
    }
}

std::string config_hash(const RunConfig& config) {
    // Worker count and output location do not change results.
    RunConfig canonical = config;
    canonical.workers = 0;
    canonical.output.clear();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : serialize_config(canonical).dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace popergm
