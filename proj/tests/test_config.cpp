#include <doctest.h>

#include "popergm/config.hpp"
#include "popergm/error.hpp"

using namespace popergm;
using nlohmann::json;

namespace {

json study_doc() {
    return json::parse(R"({
      "model": {"terms": ["edges", "nodematch:hemisphere", "gwesp:0.9"]},
      "simulate": {"nodes": 30, "groups": [
        {"n": 10, "mu": [-3, 0.5, 0.5], "sigma": [[0.02, -0.01, 0], [-0.01, 0.01, 0], [0, 0, 0.01]]},
        {"n": 10, "mu": [-2.6, 0.5, 0.2], "sigma": [[0.02, -0.01, 0], [-0.01, 0.01, 0], [0, 0, 0.01]]}]},
      "mcmc": {"iterations": 500, "burn_in": 100, "interweave": false},
      "seed": 42
    })");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults fill everything not given") {
    RunConfig cfg = parse_config(json::parse(R"({"model": {"terms": ["edges", "gwesp:0.9"]}})"));
    CHECK(cfg.hyperpriors == Hyperpriors::defaults(2));
    CHECK(cfg.mcmc.iterations == 12000);
    CHECK(cfg.mcmc.burn_in == 2000);
    CHECK(cfg.mcmc.adapt_window == 1000);
    CHECK(cfg.mcmc.adapt_interval == 20);
    CHECK(cfg.mcmc.beta == 0.05);
    CHECK(cfg.gof.draws == 100);
    CHECK(cfg.gof.levels == std::vector<double>{0.9, 0.95});
    ChainSettings s = cfg.chain_settings();
    CHECK(s.interweave);
    CHECK_FALSE(s.per_group_sigma_theta);
    CHECK(s.init == ThetaInit::zeros);
}

TEST_CASE("parse, serialise, parse is the identity") {
    RunConfig a = parse_config(study_doc());
    json out = serialize_config(a);
    RunConfig b = parse_config(out);
    CHECK(a == b);
    CHECK(serialize_config(b) == out);
    CHECK(b.simulate.groups.size() == 2);
    CHECK(b.simulate.groups[1].mu[0] == -2.6);
    CHECK_FALSE(b.mcmc.interweave);

    json custom = study_doc();
    custom["hyperpriors"] = json::parse(R"({"mu0": [0, 1, 0], "nu_theta": 7, "psi_mu": [[2,0,0],[0,2,0],[0,0,2]]})");
    RunConfig c = parse_config(custom);
    CHECK(c.hyperpriors.nu_theta == 7);
    CHECK(c.hyperpriors.mu0[1] == 1);
    CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("invalid documents are config errors") {
    auto bad = [](const char* patch) {
        json doc = study_doc();
        doc.merge_patch(json::parse(patch));
        return doc;
    };
    CHECK_THROWS_AS(parse_config(bad(R"({"mcmc": {"iterations": 100, "burn_in": 100}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"mcmc": {"iterations": "many"}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"model": {"terms": []}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"model": {"terms": ["triangles"]}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"hyperpriors": {"mu0": [0, 0]}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"hyperpriors": {"nu_mu": 1.5}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"hyperpriors": {"lambda": [[1,2,0],[2,1,0],[0,0,1]]}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"gof": {"levels": [1.0]}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"mcmc": {"init": "random"}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(bad(R"({"simulate": {"groups": [{"n": 1, "mu": [0], "sigma": [[1]]}]}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("environment overrides reach nested keys") {
    json doc = study_doc();
    std::string a = "POPERGM_MCMC__ITERATIONS=900", b = "POPERGM_SEED=7", c = "POPERGM_OUTPUT=runs/x",
                d = "OTHER_SEED=1", e = "POPERGM_GOF__LEVELS=[0.8]";
    char* env[] = {a.data(), b.data(), c.data(), d.data(), e.data(), nullptr};
    apply_env_overrides(doc, "POPERGM_", env);
    RunConfig cfg = parse_config(doc);
    CHECK(cfg.mcmc.iterations == 900);
    CHECK(cfg.seed == 7);
    CHECK(cfg.output == "runs/x");
    CHECK(cfg.gof.levels == std::vector<double>{0.8});
    CHECK(cfg.mcmc.burn_in == 100);
}

TEST_CASE("config hash tracks result-relevant settings only") {
    RunConfig a = parse_config(study_doc());
    RunConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.workers = 8;
    b.output = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 43;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("shipped experiment configs parse") {
    for (const char* name : {"single_group.json", "two_group.json", "concentration_n50.json", "brain.json"}) {
        CAPTURE(name);
        RunConfig cfg = parse_config(load_config_document(std::filesystem::path(POPERGM_SOURCE_DIR) / "configs" / name));
        CHECK(parse_config(serialize_config(cfg)) == cfg);
    }
}

}
