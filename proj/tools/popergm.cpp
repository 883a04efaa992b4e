#include <CLI11.hpp>

#include <iostream>

#include "popergm/commands.hpp"
#include "popergm/error.hpp"

extern char** environ;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
    auto* opt = cmd->add_option("--config", c.config, "run configuration (JSON)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "overrides the config seed");
    cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out, "output directory (overrides the config)");
}

popergm::RunConfig load(const Common& c, popergm::CommandPaths& paths) {
    nlohmann::json doc = popergm::load_config_document(c.config);
    popergm::apply_env_overrides(doc, "POPERGM_", environ);
    popergm::RunConfig cfg = popergm::parse_config(doc);
    if (c.seed) cfg.seed = *c.seed;
    if (c.workers) cfg.workers = *c.workers;
    if (!c.out.empty()) cfg.output = c.out;
    paths.base = std::filesystem::path(c.config).parent_path();
    if (paths.base.empty()) paths.base = ".";
    // --out is taken as given; an output path from the config file is
    // relative to that file, like every other path in it.
    paths.out = c.out.empty() ? (paths.base / cfg.output).lexically_normal() : std::filesystem::path(c.out);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian multilevel exponential random graph models for populations of networks"};
    app.require_subcommand(1);

    Common sim, fit, gof, sum, ing;
    std::string gof_trace, sum_trace;
    auto* c_sim = app.add_subcommand("simulate", "simulate a study population from group-level parameters");
    add_common(c_sim, sim, true);
    auto* c_fit = app.add_subcommand("fit", "run the multilevel sampler on a population");
    add_common(c_fit, fit, true);
    auto* c_gof = app.add_subcommand("gof", "posterior predictive goodness-of-fit envelopes");
    add_common(c_gof, gof, true);
    c_gof->add_option("--trace", gof_trace, "trace.csv from fit (default: <output>/trace.csv)");
    auto* c_sum = app.add_subcommand("summary", "posterior summaries of a trace");
    add_common(c_sum, sum, false);
    c_sum->add_option("--trace", sum_trace, "trace.csv from fit");
    auto* c_ing = app.add_subcommand("ingest", "threshold correlation matrices into networks");
    add_common(c_ing, ing, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        popergm::CommandPaths paths;
        if (*c_sim) {
            popergm::cmd_simulate(load(sim, paths), paths, std::cerr);
        } else if (*c_fit) {
            popergm::cmd_fit(load(fit, paths), paths, std::cerr);
        } else if (*c_gof) {
            auto cfg = load(gof, paths);
            std::filesystem::path trace = gof_trace.empty() ? paths.out / "trace.csv" : std::filesystem::path(gof_trace);
            popergm::cmd_gof(cfg, paths, trace, std::cerr);
        } else if (*c_sum) {
            std::filesystem::path trace;
            if (!sum.config.empty()) {
                auto cfg = load(sum, paths);
                trace = sum_trace.empty() ? paths.out / "trace.csv" : std::filesystem::path(sum_trace);
            } else {
                if (sum_trace.empty()) throw popergm::ConfigError("summary needs --trace or --config");
                trace = sum_trace;
                paths.out = sum.out.empty() ? trace.parent_path() : std::filesystem::path(sum.out);
                if (paths.out.empty()) paths.out = ".";
            }
            popergm::cmd_summary(trace, paths, std::cerr);
        } else if (*c_ing) {
            popergm::cmd_ingest(load(ing, paths), paths, std::cerr);
        }
    } catch (const popergm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const popergm::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const popergm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
