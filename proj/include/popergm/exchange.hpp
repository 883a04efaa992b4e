#pragma once

#include <functional>

#include "popergm/model.hpp"
#include "popergm/random.hpp"
#include "popergm/sampler.hpp"

namespace popergm {

/// Symmetric Gaussian random-walk proposal centred on the current state.
/// The covariance may be singular; a zero covariance proposes the current
/// state itself.
class ExchangeProposal {
public:
    explicit ExchangeProposal(const Matrix& covariance);

    const Matrix& covariance() const { return covariance_; }
    Vector draw(const Vector& current, Rng& rng) const;

private:
    Matrix covariance_;
    Matrix factor_;
};

using LogDensity = std::function<double(const Vector&)>;

struct ExchangeResult {
    Vector theta;
    bool accepted = false;
    /// Statistics of the auxiliary network; empty when the proposal fell
    /// outside the prior support and no simulation was run.
    StatVector aux_stats;
    double log_ratio = 0.0;
};

/// log AR = (theta' - theta)^T (s(y) - s(y')) + log pi(theta') - log pi(theta).
/// The normalising constants cancel and are never evaluated.
double exchange_log_ratio(const Vector& current, const Vector& proposed, const StatVector& observed_stats,
                          const StatVector& aux_stats, double log_prior_current, double log_prior_proposed);

/// Single exchange move. Draws theta' from the proposal, an auxiliary
/// network y' at theta' with the toggle sampler (started from `observed` when
/// the config asks for it), and accepts with probability min(1, AR).
/// A non-finite log prior at theta' rejects without simulating.
ExchangeResult exchange_update(const Vector& theta, const Graph& observed, const StatVector& observed_stats,
                               const LogDensity& log_prior, const ExchangeProposal& proposal, const Model& model,
                               const SamplerConfig& sampler, Rng& rng);

}  // namespace popergm
