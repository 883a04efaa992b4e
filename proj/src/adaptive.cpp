#include "popergm/adaptive.hpp"

#include <algorithm>
#include <cmath>

namespace popergm {

RunningMoments::RunningMoments(int dimension)
    : mean_(Vector::Zero(dimension)), scatter_(Matrix::Zero(dimension, dimension)) {}

void RunningMoments::add(const Vector& x) {
    ++count_;
    Vector before = x - mean_;
    mean_ += before / double(count_);
    scatter_ += before * (x - mean_).transpose();
}

Matrix RunningMoments::covariance() const {
    if (count_ < 2) return Matrix::Zero(mean_.size(), mean_.size());
    Matrix c = scatter_ / double(count_ - 1);
    return 0.5 * (c + c.transpose());
}

AdaptiveProposal AdaptiveProposal::initial(int dimension, const AdaptationSettings& settings) {
    AdaptiveProposal ap;
    ap.dimension = dimension;
    ap.base_cov = Matrix::Identity(dimension, dimension);
    ap.log_scale = std::log(settings.initial_scale);
    ap.beta = settings.beta;
    return ap;
}

double AdaptiveProposal::scale() const { return std::exp(log_scale); }

Matrix AdaptiveProposal::main_covariance() const {
    return (2.38 * 2.38) * scale() * base_cov / double(dimension);
}

Matrix AdaptiveProposal::fallback_covariance() const {
    return (0.1 * 0.1) * scale() * Matrix::Identity(dimension, dimension) / double(dimension);
}

ExchangeProposal AdaptiveProposal::choose(Rng& rng) const {
    const double u = uniform01(rng);
    if (has_base_cov && u >= beta) return ExchangeProposal(main_covariance());
    return ExchangeProposal(fallback_covariance());
}

AdaptiveProposal adapt_proposal(AdaptiveProposal proposal, const RunningMoments& history,
                                double window_acceptance_rate, const AdaptationSettings& settings) {
    const int p = proposal.dimension;
    proposal.has_base_cov = false;
    if (history.count() >= p + 2) {
        Matrix cov = history.covariance();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
        const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
        const double bottom = eig.eigenvalues().minCoeff();
        if (top > 0.0 && bottom > top * 1e-12) {
            proposal.base_cov = cov + settings.regularization * Matrix::Identity(p, p);
            proposal.has_base_cov = true;
        }
    }
    const int k = ++proposal.batches;
    const double step = std::min(0.5, 1.0 / std::sqrt(double(k)));
    const bool low = window_acceptance_rate < settings.target_rate;
    const bool shrink = settings.literal_direction ? !low : low;
    proposal.log_scale += shrink ? -step : step;
    proposal.window_accepted = 0;
    proposal.window_proposed = 0;
    return proposal;
}

}  // namespace popergm
