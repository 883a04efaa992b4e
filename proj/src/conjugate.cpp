#include "popergm/conjugate.hpp"

#include <stdexcept>
#include <string>

#include "popergm/error.hpp"

namespace popergm {

namespace {

bool is_spd(const Matrix& m) {
    if (m.rows() != m.cols() || !m.allFinite()) return false;
    if (!m.isApprox(m.transpose(), 1e-10)) return false;
    return Eigen::LLT<Matrix>(m).info() == Eigen::Success;
}

Matrix spd_inverse(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success || !m.allFinite())
        throw NumericalError(std::string(what) + " is not symmetric positive definite");
    return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

Vector draw_from_precision(Rng& rng, const Matrix& precision, const Vector& linear, const char* what) {
    Eigen::LLT<Matrix> llt(precision);
    if (llt.info() != Eigen::Success) throw NumericalError(std::string(what) + " precision is singular");
    Vector mean = llt.solve(linear);
    // x = mean + L^-T z has covariance (L L^T)^-1.
    Vector z = standard_normal(rng, int(mean.size()));
    return mean + llt.matrixU().solve(z);
}

}  // namespace

Hyperpriors Hyperpriors::defaults(int p) {
    Hyperpriors h;
    h.mu0 = Vector::Zero(p);
    h.lambda = 100.0 * Matrix::Identity(p, p);
    h.nu_theta = p + 2;
    h.psi_theta = Matrix::Identity(p, p);
    h.nu_mu = p + 2;
    h.psi_mu = Matrix::Identity(p, p);
    return h;
}

void Hyperpriors::validate() const {
    const int p = dimension();
    if (p < 1) throw ConfigError("hyperprior mu0 must be non-empty");
    auto check = [&](const Matrix& m, const char* name) {
        if (m.rows() != p || m.cols() != p)
            throw ConfigError(std::string("hyperprior ") + name + " must be " + std::to_string(p) + "x" + std::to_string(p));
        if (!is_spd(m)) throw ConfigError(std::string("hyperprior ") + name + " must be symmetric positive definite");
    };
    check(lambda, "lambda");
    check(psi_theta, "psi_theta");
    check(psi_mu, "psi_mu");
    if (!(nu_theta > p - 1)) throw ConfigError("nu_theta must exceed p - 1");
    if (!(nu_mu > p - 1)) throw ConfigError("nu_mu must exceed p - 1");
}

void MultilevelState::validate(std::span<const int> group) const {
    const int p = dimension();
    if (theta.size() != group.size()) throw std::invalid_argument("state has wrong number of theta vectors");
    for (const auto& t : theta)
        if (t.size() != p) throw std::invalid_argument("theta dimension mismatch");
    for (const auto& m : mu_group)
        if (m.size() != p) throw std::invalid_argument("group mean dimension mismatch");
    for (int g : group)
        if (g < 1 || g > n_groups()) throw std::invalid_argument("group label outside 1..J");
    if (sigma_theta.empty() || (sigma_theta.size() != 1 && int(sigma_theta.size()) != n_groups()))
        throw std::invalid_argument("sigma_theta must hold 1 or J matrices");
    for (const auto& s : sigma_theta)
        if (!is_spd(s)) throw NumericalError("sigma_theta is not symmetric positive definite");
    if (!is_spd(sigma_mu)) throw NumericalError("sigma_mu is not symmetric positive definite");
}

std::vector<Matrix> update_sigma_theta(const MultilevelState& state, std::span<const int> group,
                                       const Hyperpriors& hyper, Rng& rng) {
    const int p = state.dimension();
    const std::size_t slots = state.sigma_theta.size();
    std::vector<Matrix> scatter(slots, Matrix::Zero(p, p));
    std::vector<double> counts(slots, 0.0);
    for (std::size_t i = 0; i < state.theta.size(); ++i) {
        std::size_t slot = slots == 1 ? 0 : std::size_t(group[i] - 1);
        Vector dev = state.deviation(int(i), group);
        scatter[slot] += dev * dev.transpose();
        counts[slot] += 1.0;
    }
    std::vector<Matrix> out;
    for (std::size_t s = 0; s < slots; ++s)
        out.push_back(draw_inverse_wishart(rng, hyper.nu_theta + counts[s], hyper.psi_theta + scatter[s]));
    return out;
}

std::vector<Vector> update_group_means_centered(const MultilevelState& state, std::span<const int> group,
                                                const Hyperpriors& hyper, Rng& rng) {
    (void)hyper;
    const int p = state.dimension();
    const int J = state.n_groups();
    std::vector<Vector> sums(J, Vector::Zero(p));
    std::vector<double> counts(J, 0.0);
    for (std::size_t i = 0; i < state.theta.size(); ++i) {
        sums[group[i] - 1] += state.theta[i];
        counts[group[i] - 1] += 1.0;
    }
    const Matrix mu_precision = spd_inverse(state.sigma_mu, "sigma_mu");
    const Vector prior_linear = mu_precision * state.mu_pop;
    std::vector<Vector> out;
    for (int j = 0; j < J; ++j) {
        const Matrix theta_precision = spd_inverse(state.sigma_theta_for(j + 1), "sigma_theta");
        Matrix precision = counts[j] * theta_precision + mu_precision;
        Vector linear = theta_precision * sums[j] + prior_linear;
        out.push_back(draw_from_precision(rng, precision, linear, "group mean"));
    }
    return out;
}

Vector update_pop_mean(const MultilevelState& state, const Hyperpriors& hyper, Rng& rng) {
    const int p = state.dimension();
    const Matrix mu_precision = spd_inverse(state.sigma_mu, "sigma_mu");
    const Matrix lambda_precision = spd_inverse(hyper.lambda, "lambda");
    Vector total = Vector::Zero(p);
    for (const auto& m : state.mu_group) total += m;
    Matrix precision = double(state.n_groups()) * mu_precision + lambda_precision;
    Vector linear = mu_precision * total + lambda_precision * hyper.mu0;
    return draw_from_precision(rng, precision, linear, "population mean");
}

Matrix update_sigma_mu(const MultilevelState& state, const Hyperpriors& hyper, Rng& rng) {
    const int p = state.dimension();
    Matrix scatter = Matrix::Zero(p, p);
    for (const auto& m : state.mu_group) {
        Vector dev = m - state.mu_pop;
        scatter += dev * dev.transpose();
    }
    return draw_inverse_wishart(rng, hyper.nu_mu + state.n_groups(), hyper.psi_mu + scatter);
}

}  // namespace popergm
