#include "popergm/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "popergm/parallel.hpp"

namespace popergm {

std::int64_t SamplerConfig::steps_for(int n_nodes) const {
    if (aux_iterations < 0 || burn_in < 0) throw std::invalid_argument("sampler iteration counts must be >= 0");
    std::int64_t dyads = std::int64_t(n_nodes) * (n_nodes - 1) / 2;
    std::int64_t main = aux_iterations > 0 ? aux_iterations : kDefaultTogglesPerDyad * dyads;
    return burn_in + main;
}

std::int64_t run_toggles(const Model& model, const Vector& theta, Graph& graph, StatVector& stats,
                         std::int64_t steps, Rng& rng) {
    if (theta.size() != model.dimension() || stats.size() != model.dimension())
        throw std::invalid_argument("parameter dimension does not match model");
    const auto& dyads = model.dyads();
    if (dyads.empty() || steps <= 0) return 0;
    std::uniform_int_distribution<std::size_t> pick(0, dyads.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vector delta(model.dimension());
    std::int64_t accepted = 0;
    for (std::int64_t step = 0; step < steps; ++step) {
        auto [i, j] = dyads[pick(rng)];
        model.change(graph, i, j, delta);
        const bool on = graph.has_edge(i, j);
        const double log_ratio = on ? -theta.dot(delta) : theta.dot(delta);
        const double u = unif(rng);
        if (log_ratio >= 0.0 || u < std::exp(log_ratio)) {
            graph.toggle(i, j);
            if (on)
                stats -= delta;
            else
                stats += delta;
            ++accepted;
        }
    }
    return accepted;
}

SimulatedGraph simulate_ergm(const Model& model, const Vector& theta, const SamplerConfig& config, Rng& rng,
                             const Graph* observed, const StatVector* observed_stats) {
    if (theta.size() != model.dimension())
        throw std::invalid_argument("parameter dimension " + std::to_string(theta.size()) +
                                    " does not match model dimension " + std::to_string(model.dimension()));
    SimulatedGraph out;
    switch (config.init) {
        case SamplerConfig::Init::empty:
            out.graph = Graph(model.n_nodes());
            out.stats = StatVector::Zero(model.dimension());
            break;
        case SamplerConfig::Init::observed:
            if (!observed) throw std::invalid_argument("sampler init 'observed' needs a start graph");
            out.graph = *observed;
            out.stats = observed_stats ? *observed_stats : model.summary(*observed);
            break;
        case SamplerConfig::Init::given:
            if (!config.given) throw std::invalid_argument("sampler init 'given' needs config.given");
            out.graph = *config.given;
            out.stats = model.summary(out.graph);
            break;
    }
    if (out.graph.n_nodes() != model.n_nodes()) throw std::invalid_argument("start graph size does not match model");
    out.accepted = run_toggles(model, theta, out.graph, out.stats, config.steps_for(model.n_nodes()), rng);
    return out;
}

GraphPopulation simulate_population(const ModelSpec& spec, const NodeCovariates& cov,
                                    const std::vector<Vector>& thetas, const SamplerConfig& config,
                                    std::uint64_t seed, int workers) {
    GraphPopulation pop;
    pop.covariates = cov;
    if (thetas.empty()) return pop;
    for (const auto& t : thetas)
        if (t.size() != thetas.front().size()) throw std::invalid_argument("parameter vectors differ in length");
    Model model(spec, cov);
    pop.graphs.resize(thetas.size());
    pop.group.assign(thetas.size(), 1);
    parallel_for(thetas.size(), workers, [&](std::size_t k) {
        Rng rng = make_stream(seed, 0, StreamKind::simulate, k);
        pop.graphs[k] = simulate_ergm(model, thetas[k], config, rng).graph;
    });
    for (std::size_t k = 0; k < thetas.size(); ++k) pop.subjects.push_back("net" + std::to_string(k + 1));
    return pop;
}

}  // namespace popergm
