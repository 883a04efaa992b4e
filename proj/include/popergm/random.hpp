#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace popergm {

using Rng = std::mt19937_64;

/// Labels for the independent random streams used inside one sweep.
enum class StreamKind : std::uint32_t {
    sigma_theta = 1,
    sigma_mu,
    pop_mean,
    group_means,
    theta_update,
    ncp_proposal,
    ncp_auxiliary,
    predictive,
    simulate,
    initialise,
};

/// Deterministic stream for (root seed, iteration, kind, index). Identical
/// arguments always give an identical engine, whatever thread asks for it.
Rng make_stream(std::uint64_t seed, std::uint64_t iteration, StreamKind kind, std::uint64_t index = 0);

double uniform01(Rng& rng);

/// z ~ N(0, I_p)
Eigen::VectorXd standard_normal(Rng& rng, int p);

/// Lower Cholesky factor; throws NumericalError with `what` in the message
/// if the matrix is not symmetric positive definite.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, const char* what);

/// Symmetric square root factor that tolerates singular (PSD) matrices.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m);

/// Draw from N(mean, L L^T) given the lower factor L.
Eigen::VectorXd draw_normal(Rng& rng, const Eigen::VectorXd& mean, const Eigen::MatrixXd& factor);

/// Draw from the inverse-Wishart W^{-1}(dof, scale), with E = scale / (dof - p - 1).
/// Bartlett decomposition of the Wishart(dof, scale^{-1}) precision.
Eigen::MatrixXd draw_inverse_wishart(Rng& rng, double dof, const Eigen::MatrixXd& scale);

/// Precomputed multivariate normal log density.
class NormalDensity {
public:
    NormalDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance);
    double operator()(const Eigen::VectorXd& x) const;
    const Eigen::VectorXd& mean() const { return mean_; }

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd lower_;
    double log_norm_;
};

}  // namespace popergm
