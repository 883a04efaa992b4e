#pragma once

#include "popergm/exchange.hpp"
#include "popergm/model.hpp"
#include "popergm/random.hpp"

namespace popergm {

/// Streaming mean and covariance (Welford).
class RunningMoments {
public:
    explicit RunningMoments(int dimension = 0);

    void add(const Vector& x);
    long long count() const { return count_; }
    const Vector& mean() const { return mean_; }
    /// Unbiased sample covariance; zero matrix when count < 2.
    Matrix covariance() const;

private:
    long long count_ = 0;
    Vector mean_;
    Matrix scatter_;
};

struct AdaptationSettings {
    /// Adaptation runs for iterations 1..window and is frozen afterwards.
    int window = 1000;
    /// Iterations between adaptation checkpoints.
    int interval = 20;
    double beta = 0.05;
    double target_rate = 0.234;
    double initial_scale = 1.0;
    double regularization = 1e-6;
    /// Follow the literal reading where low acceptance enlarges the scale.
    bool literal_direction = false;

    bool operator==(const AdaptationSettings&) const = default;
};

/// Two-component random-walk mixture
///   (1 - beta) N(x, 2.38^2 scale Sigma / p) + beta N(x, 0.1^2 scale I / p).
/// Until a usable Sigma exists only the second component is used.
struct AdaptiveProposal {
    int dimension = 0;
    Matrix base_cov;
    bool has_base_cov = false;
    double log_scale = 0.0;
    double beta = 0.05;
    int window_accepted = 0;
    int window_proposed = 0;
    /// Checkpoints already applied; the next adjustment uses batches + 1.
    int batches = 0;

    static AdaptiveProposal initial(int dimension, const AdaptationSettings& settings);

    double scale() const;
    Matrix main_covariance() const;
    Matrix fallback_covariance() const;

    /// Picks a mixture component and returns it as a Gaussian proposal.
    ExchangeProposal choose(Rng& rng) const;

    void record(bool accepted) {
        ++window_proposed;
        window_accepted += accepted ? 1 : 0;
    }
    double window_rate() const { return window_proposed == 0 ? 0.0 : double(window_accepted) / window_proposed; }
};

/// Checkpoint update: Sigma becomes the (regularised) sample covariance of
/// the block's history, and log(scale) moves by min(0.5, 1/sqrt(k)) toward
/// the target acceptance rate, k being the checkpoint number. A history
/// shorter than p + 2 points or with a singular covariance leaves only the
/// fallback component active. Window counters are reset.
AdaptiveProposal adapt_proposal(AdaptiveProposal proposal, const RunningMoments& history,
                                double window_acceptance_rate, const AdaptationSettings& settings);

}  // namespace popergm
