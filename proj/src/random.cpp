#include "popergm/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "popergm/error.hpp"

namespace popergm {

Rng make_stream(std::uint64_t seed, std::uint64_t iteration, StreamKind kind, std::uint64_t index) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(iteration),
                      std::uint32_t(iteration >> 32), std::uint32_t(kind), std::uint32_t(index),
                      std::uint32_t(index >> 32)};
    return Rng(seq);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Eigen::VectorXd standard_normal(Rng& rng, int p) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(p);
    for (int k = 0; k < p; ++k) z[k] = normal(rng);
    return z;
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success || !m.allFinite())
        throw NumericalError(std::string(what) + " is not symmetric positive definite");
    return llt.matrixL();
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& m) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal();
}

Eigen::VectorXd draw_normal(Rng& rng, const Eigen::VectorXd& mean, const Eigen::MatrixXd& factor) {
    return mean + factor * standard_normal(rng, int(mean.size()));
}

Eigen::MatrixXd draw_inverse_wishart(Rng& rng, double dof, const Eigen::MatrixXd& scale) {
    const int p = int(scale.rows());
    if (!(dof > p - 1)) throw NumericalError("inverse-Wishart degrees of freedom must exceed p - 1");
    Eigen::MatrixXd precision_scale = cholesky_lower(scale, "inverse-Wishart scale").triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(p, p));
    // precision_scale = L^{-1} with scale = L L^T, so scale^{-1} = L^{-T} L^{-1}.
    Eigen::MatrixXd upper_root = precision_scale.transpose();  // scale^{-1} = U U^T, U = L^{-T}
    Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
    std::normal_distribution<double> normal;
    for (int i = 0; i < p; ++i) {
        std::chi_squared_distribution<double> chi(dof - i);
        bartlett(i, i) = std::sqrt(chi(rng));
        for (int j = 0; j < i; ++j) bartlett(i, j) = normal(rng);
    }
    // Wishart draw W = (U A)(U A)^T; return W^{-1}.
    Eigen::MatrixXd ua = upper_root * bartlett;
    Eigen::MatrixXd w = ua * ua.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(w);
    if (llt.info() != Eigen::Success) throw NumericalError("Wishart draw is not positive definite");
    Eigen::MatrixXd out = llt.solve(Eigen::MatrixXd::Identity(p, p));
    return 0.5 * (out + out.transpose());
}

NormalDensity::NormalDensity(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance)
    : mean_(std::move(mean)), lower_(cholesky_lower(covariance, "normal covariance")) {
    double log_det = 2.0 * lower_.diagonal().array().log().sum();
    log_norm_ = -0.5 * (double(mean_.size()) * std::log(2.0 * std::numbers::pi) + log_det);
}

double NormalDensity::operator()(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z = lower_.triangularView<Eigen::Lower>().solve(x - mean_);
    return log_norm_ - 0.5 * z.squaredNorm();
}

}  // namespace popergm
