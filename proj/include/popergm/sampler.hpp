#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "popergm/graph.hpp"
#include "popergm/model.hpp"
#include "popergm/random.hpp"

namespace popergm {

/// Inner Metropolis-Hastings toggle sampler settings.
struct SamplerConfig {
    enum class Init { empty, observed, given };

    /// Toggle proposals per draw. Zero selects the default of 20 per dyad.
    std::int64_t aux_iterations = 0;
    /// Extra toggle proposals run before the counted ones.
    std::int64_t burn_in = 0;
    Init init = Init::empty;
    /// Start graph when init == given.
    std::optional<Graph> given;

    std::int64_t steps_for(int n_nodes) const;
};

inline constexpr std::int64_t kDefaultTogglesPerDyad = 20;

/// Graph together with its running sufficient statistics.
struct SimulatedGraph {
    Graph graph;
    StatVector stats;
    std::int64_t accepted = 0;
};

/// Runs `steps` single-dyad MH updates in place. Each step picks a dyad
/// uniformly, computes its change statistic and accepts the flip with
/// probability min(1, exp(+-theta^T delta)). `stats` is kept equal to the
/// sufficient statistics of `graph` by adding signed change statistics.
std::int64_t run_toggles(const Model& model, const Vector& theta, Graph& graph, StatVector& stats,
                         std::int64_t steps, Rng& rng);

/// Draw from the ERGM at theta: the final state of the toggle chain.
/// `observed` supplies the start graph (and its statistics, if known) when
/// config.init == observed.
SimulatedGraph simulate_ergm(const Model& model, const Vector& theta, const SamplerConfig& config, Rng& rng,
                             const Graph* observed = nullptr, const StatVector* observed_stats = nullptr);

/// One independent draw per parameter vector. Stream k uses
/// make_stream(seed, 0, simulate, k), so results do not depend on `workers`.
GraphPopulation simulate_population(const ModelSpec& spec, const NodeCovariates& cov,
                                    const std::vector<Vector>& thetas, const SamplerConfig& config,
                                    std::uint64_t seed, int workers = 1);

}  // namespace popergm
