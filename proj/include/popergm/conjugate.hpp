#pragma once

#include <span>
#include <vector>

#include "popergm/model.hpp"
#include "popergm/random.hpp"

namespace popergm {

/// Fixed hyperprior constants:
///   mu_pop ~ N(mu0, lambda), Sigma_mu ~ W^-1(nu_mu, psi_mu),
///   Sigma_theta ~ W^-1(nu_theta, psi_theta).
struct Hyperpriors {
    Vector mu0;
    Matrix lambda;
    double nu_theta = 0;
    Matrix psi_theta;
    double nu_mu = 0;
    Matrix psi_mu;

    /// mu0 = 0, lambda = 100 I, nu = p + 2, psi = I.
    static Hyperpriors defaults(int p);
    int dimension() const { return int(mu0.size()); }
    /// Throws ConfigError on bad shapes, non-SPD matrices or dof <= p - 1.
    void validate() const;

    bool operator==(const Hyperpriors&) const = default;
};

/// All latent parameters of the multilevel model.
///
/// sigma_theta holds one matrix when the individual-level covariance is
/// shared across groups, or J matrices (one per group) otherwise.
struct MultilevelState {
    std::vector<Vector> theta;
    std::vector<Vector> mu_group;
    std::vector<Matrix> sigma_theta;
    Vector mu_pop;
    Matrix sigma_mu;

    int dimension() const { return int(mu_pop.size()); }
    int n_groups() const { return int(mu_group.size()); }
    bool shared_sigma_theta() const { return sigma_theta.size() == 1; }
    /// Covariance for 1-based group label j.
    const Matrix& sigma_theta_for(int j) const { return shared_sigma_theta() ? sigma_theta.front() : sigma_theta[j - 1]; }
    /// theta^(i) - mu^(g_i).
    Vector deviation(int i, std::span<const int> group) const { return theta[i] - mu_group[group[i] - 1]; }
    void validate(std::span<const int> group) const;

    bool operator==(const MultilevelState&) const = default;
};

/// Sigma_theta | theta, mu ~ W^-1(nu_theta + n, psi_theta + sum dev dev^T),
/// pooled over all networks when shared, else per group.
std::vector<Matrix> update_sigma_theta(const MultilevelState& state, std::span<const int> group,
                                       const Hyperpriors& hyper, Rng& rng);

/// mu^(j) | theta, Sigma_theta, mu_pop, Sigma_mu ~ N(V_j b_j, V_j) with
/// V_j = (n_j Sigma_theta^-1 + Sigma_mu^-1)^-1 and
/// b_j = Sigma_theta^-1 sum_{g_i = j} theta^(i) + Sigma_mu^-1 mu_pop.
std::vector<Vector> update_group_means_centered(const MultilevelState& state, std::span<const int> group,
                                                const Hyperpriors& hyper, Rng& rng);

/// mu_pop | mu, Sigma_mu ~ N(V (Sigma_mu^-1 sum_j mu^(j) + lambda^-1 mu0), V),
/// V = (J Sigma_mu^-1 + lambda^-1)^-1.
Vector update_pop_mean(const MultilevelState& state, const Hyperpriors& hyper, Rng& rng);

/// Sigma_mu | mu, mu_pop ~ W^-1(nu_mu + J, psi_mu + sum_j (mu^(j) - mu_pop)(.)^T).
Matrix update_sigma_mu(const MultilevelState& state, const Hyperpriors& hyper, Rng& rng);

}  // namespace popergm
