#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "popergm/adaptive.hpp"
#include "popergm/conjugate.hpp"
#include "popergm/graph.hpp"
#include "popergm/model.hpp"
#include "popergm/sampler.hpp"

namespace popergm {

/// How intractable-likelihood blocks are updated. `exact` replaces every
/// exchange move by a plain Metropolis move using enumerated normalising
/// constants; it exists to cross-check the exchange path on tiny graphs.
enum class LikelihoodKernel { exchange, exact };

enum class ThetaInit { zeros, mple };

struct ChainSettings {
    int iterations = 12000;
    int burn_in = 2000;
    int thin = 1;
    /// Keep theta every `theta_thin`-th retained record.
    int theta_thin = 10;
    AdaptationSettings adaptation;
    /// Auxiliary draw settings; every auxiliary chain starts at the observed
    /// network of its block.
    SamplerConfig aux;
    /// false runs the centred-only sweep without the non-centred mu move.
    bool interweave = true;
    bool per_group_sigma_theta = false;
    ThetaInit init = ThetaInit::zeros;
    int workers = 0;
    std::uint64_t seed = 1;
    LikelihoodKernel kernel = LikelihoodKernel::exchange;
    std::shared_ptr<const StatisticCensus> census;

    /// Throws ConfigError.
    void validate() const;
};

struct BlockAcceptance {
    std::string block;
    long long proposed = 0;
    long long accepted = 0;
    /// Counts restricted to iterations after the adaptation window.
    long long proposed_frozen = 0;
    long long accepted_frozen = 0;

    double rate() const { return proposed ? double(accepted) / double(proposed) : 0.0; }
    double frozen_rate() const { return proposed_frozen ? double(accepted_frozen) / double(proposed_frozen) : 0.0; }

    bool operator==(const BlockAcceptance&) const = default;
};

/// Retained draws. Records are taken at iterations k > burn_in with
/// (k - burn_in) % thin == 0.
struct PosteriorTrace {
    std::vector<std::string> term_names;
    int n_groups = 0;
    int n_networks = 0;
    bool shared_sigma_theta = true;

    std::vector<int> iterations;
    std::vector<std::vector<Vector>> mu_group;
    std::vector<Vector> mu_pop;
    std::vector<std::vector<Matrix>> sigma_theta;
    std::vector<Matrix> sigma_mu;
    /// Per record: one flag per theta block, then one per non-centred mu block.
    std::vector<std::vector<std::uint8_t>> accepted;

    std::vector<int> theta_iterations;
    std::vector<std::vector<Vector>> theta;

    std::vector<BlockAcceptance> acceptance;

    std::size_t size() const { return iterations.size(); }
    int dimension() const { return int(term_names.size()); }

    /// Flat view: "iteration", "mu.<j>.<term>", "mu_pop.<term>",
    /// "sigma_theta.<a>.<b>" (or "sigma_theta.g<j>.<a>.<b>"), "sigma_mu.<a>.<b>".
    std::vector<std::string> column_names() const;
    std::vector<double> row(std::size_t record) const;
    /// Rebuilds the group-mean draws from a flat table (other fields empty).
    static PosteriorTrace from_table(const std::vector<std::string>& columns,
                                     const std::vector<std::vector<double>>& rows);

    bool operator==(const PosteriorTrace&) const = default;
};

/// Maximum pseudo-likelihood estimate under the dyad-independence
/// approximation (ridge-penalised logistic regression on change statistics).
Vector pseudo_likelihood_estimate(const Model& model, const Graph& g, double ridge = 1e-3);

/// Exchange-within-Gibbs sampler for the multilevel ERGM, with optional
/// interweaving of the centred and non-centred group-mean updates.
class MultilevelSampler {
public:
    MultilevelSampler(const GraphPopulation& data, ModelSpec spec, Hyperpriors hyper, ChainSettings settings);

    const MultilevelState& state() const { return state_; }
    void set_state(MultilevelState state);
    const Model& model() const { return model_; }
    const ChainSettings& settings() const { return settings_; }
    const std::vector<AdaptiveProposal>& theta_proposals() const { return theta_proposals_; }
    const std::vector<AdaptiveProposal>& mu_proposals() const { return mu_proposals_; }

    /// Replaces observed network i (used by prior-consistency checks).
    void set_observed(int i, const Graph& g);

    /// Individual-level update of theta^(i) with prior N(mu^(g_i), Sigma_theta).
    /// Returns whether the move was accepted.
    bool update_theta_individual(int i, int iteration);

    /// Non-centred group-mean moves: deviations theta^(i) - mu^(g_i) are held
    /// fixed, one auxiliary network per member is simulated at mu' + deviation,
    /// and on acceptance members' theta are reconstituted. Returns acceptance
    /// per group.
    std::vector<bool> update_mu_noncentered(int iteration);

    /// One full sweep (interweaving or centred-only per settings).
    void sweep(int iteration);

    /// Pushes current block values into the adaptation history and applies
    /// a checkpoint when `iteration` is one.
    void end_iteration(int iteration);

    PosteriorTrace run();

private:
    struct Block {
        RunningMoments history;
        BlockAcceptance counts;
    };

    void initialise();
    void record_acceptance(Block& block, AdaptiveProposal& proposal, bool accepted, int iteration);
    double log_likelihood_exact(const Vector& theta, const StatVector& stats) const;

    const GraphPopulation& data_;
    Model model_;
    Hyperpriors hyper_;
    ChainSettings settings_;
    SamplerConfig aux_;
    std::vector<StatVector> observed_stats_;
    std::vector<Graph> observed_;
    std::vector<std::vector<int>> members_;
    MultilevelState state_;
    std::vector<AdaptiveProposal> theta_proposals_;
    std::vector<AdaptiveProposal> mu_proposals_;
    std::vector<Block> theta_blocks_;
    std::vector<Block> mu_blocks_;
    std::vector<std::uint8_t> last_flags_;
};

PosteriorTrace run_chain(const GraphPopulation& data, const ModelSpec& spec, const Hyperpriors& hyper,
                         const ChainSettings& settings);

}  // namespace popergm
