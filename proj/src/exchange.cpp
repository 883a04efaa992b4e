#include "popergm/exchange.hpp"

#include <cmath>
#include <stdexcept>

namespace popergm {

ExchangeProposal::ExchangeProposal(const Matrix& covariance)
    : covariance_(covariance), factor_(psd_factor(covariance)) {
    if (covariance.rows() != covariance.cols()) throw std::invalid_argument("proposal covariance must be square");
}

Vector ExchangeProposal::draw(const Vector& current, Rng& rng) const {
    return draw_normal(rng, current, factor_);
}

double exchange_log_ratio(const Vector& current, const Vector& proposed, const StatVector& observed_stats,
                          const StatVector& aux_stats, double log_prior_current, double log_prior_proposed) {
    return (proposed - current).dot(observed_stats - aux_stats) + log_prior_proposed - log_prior_current;
}

ExchangeResult exchange_update(const Vector& theta, const Graph& observed, const StatVector& observed_stats,
                               const LogDensity& log_prior, const ExchangeProposal& proposal, const Model& model,
                               const SamplerConfig& sampler, Rng& rng) {
    if (theta.size() != model.dimension() || proposal.covariance().rows() != model.dimension())
        throw std::invalid_argument("exchange update dimension mismatch");
    ExchangeResult out;
    out.theta = theta;
    Vector candidate = proposal.draw(theta, rng);
    const double lp_candidate = log_prior(candidate);
    if (!std::isfinite(lp_candidate)) {
        out.log_ratio = -INFINITY;
        return out;
    }
    SimulatedGraph aux = simulate_ergm(model, candidate, sampler, rng, &observed, &observed_stats);
    out.aux_stats = std::move(aux.stats);
    out.log_ratio = exchange_log_ratio(theta, candidate, observed_stats, out.aux_stats, log_prior(theta), lp_candidate);
    if (out.log_ratio >= 0.0 || uniform01(rng) < std::exp(out.log_ratio)) {
        out.theta = std::move(candidate);
        out.accepted = true;
    }
    return out;
}

}  // namespace popergm
