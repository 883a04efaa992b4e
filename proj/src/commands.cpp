#include "popergm/commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "popergm/error.hpp"
#include "popergm/gof.hpp"
#include "popergm/ingest.hpp"
#include "popergm/io.hpp"
#include "popergm/random.hpp"
#include "popergm/sampler.hpp"
#include "popergm/summary.hpp"

namespace popergm {

namespace {

constexpr std::int64_t kDataBurnInPerDyad = 100;

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::string timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Model compile_model(const ModelSpec& spec, const NodeCovariates& cov) {
    try {
        return Model(spec, cov);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model does not fit the covariates: ") + e.what());
    }
}

NodeCovariates design_covariates(const SimulateSettings& s) {
    if (s.design == "hemispheres") {
        if (s.n_nodes % 2 != 0) throw ConfigError("the hemispheres design needs an even node count");
        return hemisphere_covariates(s.n_nodes);
    }
    return NodeCovariates(s.n_nodes);
}

SamplerConfig fresh_sampler(std::int64_t iterations, std::int64_t burn_in, int n_nodes) {
    SamplerConfig sc;
    sc.aux_iterations = iterations;
    const std::int64_t dyads = std::int64_t(n_nodes) * (n_nodes - 1) / 2;
    sc.burn_in = burn_in < 0 ? kDataBurnInPerDyad * dyads : burn_in;
    sc.init = SamplerConfig::Init::empty;
    return sc;
}

GraphPopulation load_population(const RunConfig& config, const fs::path& base) {
    if (config.manifest.empty()) throw ConfigError("data.manifest is not set");
    const fs::path manifest = resolve(base, config.manifest);
    const fs::path covariates =
        config.covariates.empty() ? manifest.parent_path() / "covariates.csv" : resolve(base, config.covariates);
    GraphPopulation pop = read_population(manifest, covariates);
    if (pop.size() == 0) throw DataError("population " + manifest.string() + " is empty");
    return pop;
}

}  // namespace

void cmd_simulate(const RunConfig& config, const CommandPaths& paths, std::ostream& log) {
    const ModelSpec spec = config.model_spec();
    const int p = spec.dimension();
    const auto& sim = config.simulate;
    if (sim.groups.empty()) throw ConfigError("simulate.groups is empty");
    NodeCovariates cov = design_covariates(sim);
    compile_model(spec, cov);

    std::vector<Vector> thetas;
    std::vector<int> group;
    for (std::size_t j = 0; j < sim.groups.size(); ++j) {
        const auto& g = sim.groups[j];
        Eigen::SelfAdjointEigenSolver<Matrix> eig(g.sigma, Eigen::EigenvaluesOnly);
        if (!g.sigma.isApprox(g.sigma.transpose()) ||
            eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff()))
            throw NumericalError("simulate.groups[" + std::to_string(j) + "].sigma is not positive semi-definite");
        const Matrix factor = psd_factor(g.sigma);
        for (int k = 0; k < g.n; ++k) {
            Rng rng = make_stream(config.seed, 0, StreamKind::initialise, thetas.size());
            thetas.push_back(draw_normal(rng, g.mu, factor));
            group.push_back(int(j) + 1);
        }
    }

    GraphPopulation pop = simulate_population(spec, cov, thetas, fresh_sampler(sim.iterations, sim.burn_in, sim.n_nodes),
                                              config.seed, config.workers);
    pop.group = group;
    fs::create_directories(paths.out);
    write_population(paths.out, pop);

    Table truth;
    truth.header = {"subject", "group"};
    for (const auto& name : spec.names()) truth.header.push_back("theta." + name);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        std::vector<std::string> row{pop.subjects[i], std::to_string(group[i])};
        for (int a = 0; a < p; ++a) row.push_back(format_double(thetas[i][a]));
        truth.rows.push_back(std::move(row));
    }
    write_table(paths.out / "truth.csv", truth);

    Table means;
    means.header = {"group"};
    for (const auto& name : spec.names()) means.header.push_back("mu." + name);
    for (std::size_t j = 0; j < sim.groups.size(); ++j) {
        std::vector<std::string> row{std::to_string(j + 1)};
        for (int a = 0; a < p; ++a) row.push_back(format_double(sim.groups[j].mu[a]));
        means.rows.push_back(std::move(row));
    }
    write_table(paths.out / "truth_groups.csv", means);

    if (thetas.empty())
        log << "warning: no networks requested; wrote an empty manifest\n";
    else
        log << "simulated " << thetas.size() << " networks on " << sim.n_nodes << " nodes into " << paths.out.string()
            << "\n";
}

void cmd_fit(const RunConfig& config, const CommandPaths& paths, std::ostream& log) {
    const ModelSpec spec = config.model_spec();
    GraphPopulation pop = load_population(config, paths.base);
    compile_model(spec, pop.covariates);
    const ChainSettings settings = config.chain_settings();

    const std::string started = timestamp();
    PosteriorTrace trace = run_chain(pop, spec, config.hyperpriors, settings);
    const std::string finished = timestamp();

    fs::create_directories(paths.out);
    write_trace(paths.out, trace);

    nlohmann::json manifest;
    manifest["seed"] = config.seed;
    manifest["config_hash"] = config_hash(config);
    manifest["terms"] = trace.term_names;
    manifest["networks"] = trace.n_networks;
    manifest["groups"] = trace.n_groups;
    manifest["iterations"] = settings.iterations;
    manifest["burn_in"] = settings.burn_in;
    manifest["retained"] = trace.size();
    nlohmann::json acc = nlohmann::json::array();
    for (const auto& b : trace.acceptance)
        acc.push_back({{"block", b.block},
                       {"proposed", b.proposed},
                       {"accepted", b.accepted},
                       {"rate", b.rate()},
                       {"rate_after_adaptation", b.frozen_rate()}});
    manifest["acceptance"] = acc;
    manifest["config"] = serialize_config(config);
    manifest["started"] = started;
    manifest["finished"] = finished;
    std::ofstream out(paths.out / "manifest.json");
    if (!out) throw DataError("cannot write " + (paths.out / "manifest.json").string());
    out << manifest.dump(2) << "\n";

    log << "fit " << trace.n_networks << " networks in " << trace.n_groups << " group(s); " << trace.size()
        << " records written to " << paths.out.string() << "\n";
}

void cmd_gof(const RunConfig& config, const CommandPaths& paths, const fs::path& trace_path, std::ostream& log) {
    if (!fs::exists(trace_path)) throw DataError("trace " + trace_path.string() + " does not exist");
    const ModelSpec spec = config.model_spec();
    GraphPopulation pop = load_population(config, paths.base);
    const Model model = compile_model(spec, pop.covariates);
    NumericTable table = read_numeric_table(trace_path);
    if (table.rows.empty()) throw DataError("trace " + trace_path.string() + " has no records");
    PosteriorTrace trace = PosteriorTrace::from_table(table.columns, table.rows);
    if (trace.term_names != spec.names()) throw ConfigError("trace terms do not match model.terms");

    const SamplerConfig sampler = fresh_sampler(config.gof.iterations, config.gof.burn_in, pop.covariates.n_nodes());
    const auto members = pop.members_by_group();
    fs::create_directories(paths.out);
    for (int j = 1; j <= trace.n_groups; ++j) {
        std::vector<Graph> observed;
        if (std::size_t(j - 1) < members.size())
            for (int i : members[std::size_t(j - 1)]) observed.push_back(pop.graphs[std::size_t(i)]);
        if (observed.empty()) throw DataError("group " + std::to_string(j) + " has no observed networks");
        const std::uint64_t seed = config.seed + std::uint64_t(j) * 0x9E3779B97F4A7C15ull;
        std::vector<Graph> sims = posterior_predictive(trace, j, config.gof.draws, model, sampler, seed, config.workers);
        std::vector<PredictiveEnvelope> envelopes;
        for (MetricKind kind : {MetricKind::degree, MetricKind::geodesic, MetricKind::esp})
            for (double level : config.gof.levels) envelopes.push_back(build_envelope(sims, observed, kind, level));
        const fs::path file = paths.out / ("gof_group" + std::to_string(j) + ".csv");
        write_envelopes(file, envelopes);
        log << "group " << j << ": " << sims.size() << " predictive networks, envelopes in " << file.string() << "\n";
    }
}

void cmd_summary(const fs::path& trace_path, const CommandPaths& paths, std::ostream& log) {
    if (!fs::exists(trace_path)) throw DataError("trace " + trace_path.string() + " does not exist");
    NumericTable table = read_numeric_table(trace_path);
    if (table.rows.empty()) throw DataError("trace " + trace_path.string() + " has no records");

    Table out;
    out.header = {"parameter", "mean", "sd", "q2.5", "q50", "q97.5", "ess"};
    for (int lag : kDefaultLags) out.header.push_back("acf" + std::to_string(lag));
    std::vector<double> column(table.rows.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (table.columns[c] == "iteration") continue;
        for (std::size_t r = 0; r < table.rows.size(); ++r) column[r] = table.rows[r][c];
        ParameterSummary s = summarize(table.columns[c], column);
        std::vector<std::string> row{s.name,          format_double(s.mean), format_double(s.sd),
                                     format_double(s.q025), format_double(s.q50), format_double(s.q975),
                                     s.degenerate ? "degenerate" : format_double(s.ess)};
        for (double a : s.acf) row.push_back(std::isfinite(a) ? format_double(a) : "NA");
        out.rows.push_back(std::move(row));
    }
    fs::create_directories(paths.out);
    write_table(paths.out / "summary.csv", out);
    log << "summarised " << out.rows.size() << " parameters over " << table.rows.size() << " records\n";
}

void cmd_ingest(const RunConfig& config, const CommandPaths& paths, std::ostream& log) {
    const auto& s = config.ingest;
    if (s.manifest.empty()) throw ConfigError("ingest.manifest is not set");
    CorrelationSet cs = read_correlations(resolve(paths.base, s.manifest));
    ThresholdOptions options;
    options.absolute = s.absolute;
    std::vector<double> r;
    if (s.per_network)
        r = solve_thresholds_per_network(cs, s.target_mean_degree, options);
    else
        r.assign(cs.matrices.size(), solve_threshold_for_degree(cs, s.target_mean_degree, options));
    GraphPopulation pop = threshold_networks(cs, r, options);
    if (!s.covariates.empty()) {
        pop.covariates = read_covariates(resolve(paths.base, s.covariates));
        if (pop.covariates.n_nodes() != cs.n_nodes())
            throw DataError("covariate node count does not match the correlation matrices");
    }
    fs::create_directories(paths.out);
    write_population(paths.out, pop);
    Table thresholds;
    thresholds.header = {"subject", "threshold", "edges", "mean_degree"};
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const Graph& g = pop.graphs[i];
        thresholds.rows.push_back({pop.subjects[i], format_double(r[i]), std::to_string(g.edge_count()),
                                   format_double(2.0 * double(g.edge_count()) / g.n_nodes())});
    }
    write_table(paths.out / "thresholds.csv", thresholds);
    log << "thresholded " << pop.size() << " networks; pooled mean degree " << mean_degree(pop) << "\n";
}

}  // namespace popergm
