#include "popergm/engine.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "popergm/error.hpp"
#include "popergm/exchange.hpp"
#include "popergm/parallel.hpp"

namespace popergm {

void ChainSettings::validate() const {
    if (iterations <= 0) throw ConfigError("iterations must be positive");
    if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
    if (iterations <= burn_in) throw ConfigError("iterations must exceed burn_in");
    if (thin < 1 || theta_thin < 1) throw ConfigError("thinning intervals must be >= 1");
    if (adaptation.window < 0) throw ConfigError("adaptation window must be >= 0");
    if (adaptation.interval < 1) throw ConfigError("adaptation interval must be >= 1");
    if (!(adaptation.beta >= 0.0 && adaptation.beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
    if (!(adaptation.initial_scale > 0.0)) throw ConfigError("initial proposal scale must be positive");
    if (aux.aux_iterations < 0 || aux.burn_in < 0) throw ConfigError("auxiliary iteration counts must be >= 0");
    if (kernel == LikelihoodKernel::exact && !census) throw ConfigError("exact kernel needs a statistic census");
}

namespace {

std::string sigma_column(const std::string& prefix, int a, int b) {
    return prefix + "." + std::to_string(a + 1) + "." + std::to_string(b + 1);
}

}  // namespace

std::vector<std::string> PosteriorTrace::column_names() const {
    const int p = dimension();
    std::vector<std::string> cols{"iteration"};
    for (int j = 0; j < n_groups; ++j)
        for (const auto& t : term_names) cols.push_back("mu." + std::to_string(j + 1) + "." + t);
    for (const auto& t : term_names) cols.push_back("mu_pop." + t);
    const int slots = shared_sigma_theta ? 1 : n_groups;
    for (int s = 0; s < slots; ++s) {
        std::string prefix = shared_sigma_theta ? "sigma_theta" : "sigma_theta.g" + std::to_string(s + 1);
        for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b) cols.push_back(sigma_column(prefix, a, b));
    }
    for (int a = 0; a < p; ++a)
        for (int b = a; b < p; ++b) cols.push_back(sigma_column("sigma_mu", a, b));
    return cols;
}

std::vector<double> PosteriorTrace::row(std::size_t r) const {
    const int p = dimension();
    std::vector<double> out{double(iterations[r])};
    for (const auto& m : mu_group[r]) out.insert(out.end(), m.data(), m.data() + p);
    out.insert(out.end(), mu_pop[r].data(), mu_pop[r].data() + p);
    for (const auto& s : sigma_theta[r])
        for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b) out.push_back(s(a, b));
    for (int a = 0; a < p; ++a)
        for (int b = a; b < p; ++b) out.push_back(sigma_mu[r](a, b));
    return out;
}

PosteriorTrace PosteriorTrace::from_table(const std::vector<std::string>& columns,
                                          const std::vector<std::vector<double>>& rows) {
    PosteriorTrace trace;
    // mu.<j>.<term> columns, grouped by j in order of appearance.
    std::map<int, std::vector<std::pair<std::string, std::size_t>>> by_group;
    std::size_t iteration_col = columns.size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const std::string& name = columns[c];
        if (name == "iteration") iteration_col = c;
        if (name.rfind("mu.", 0) != 0) continue;
        auto dot = name.find('.', 3);
        if (dot == std::string::npos) continue;
        int j = 0;
        try {
            j = std::stoi(name.substr(3, dot - 3));
        } catch (const std::exception&) {
            continue;
        }
        by_group[j].emplace_back(name.substr(dot + 1), c);
    }
    if (by_group.empty()) throw DataError("trace table has no mu.<group>.<term> columns");
    if (by_group.begin()->first != 1 || by_group.rbegin()->first != int(by_group.size()))
        throw DataError("trace group columns are not numbered 1..J");
    for (const auto& [name, _] : by_group.begin()->second) trace.term_names.push_back(name);
    for (const auto& [j, cols] : by_group)
        if (cols.size() != trace.term_names.size()) throw DataError("trace groups have differing term columns");
    trace.n_groups = int(by_group.size());
    const int p = int(trace.term_names.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns.size()) throw DataError("trace row has wrong number of fields");
        trace.iterations.push_back(iteration_col < columns.size() ? int(rows[r][iteration_col]) : int(r + 1));
        std::vector<Vector> mus;
        for (const auto& [j, cols] : by_group) {
            Vector m(p);
            for (int k = 0; k < p; ++k) m[k] = rows[r][cols[k].second];
            mus.push_back(std::move(m));
        }
        trace.mu_group.push_back(std::move(mus));
    }
    return trace;
}

Vector pseudo_likelihood_estimate(const Model& model, const Graph& g, double ridge) {
    const int p = model.dimension();
    const auto& dyads = model.dyads();
    Matrix x(Eigen::Index(dyads.size()), p);
    Vector y(Eigen::Index(dyads.size()));
    for (std::size_t d = 0; d < dyads.size(); ++d) {
        x.row(Eigen::Index(d)) = model.change(g, dyads[d].first, dyads[d].second).transpose();
        y[Eigen::Index(d)] = g.has_edge(dyads[d].first, dyads[d].second) ? 1.0 : 0.0;
    }
    Vector beta = Vector::Zero(p);
    for (int it = 0; it < 100; ++it) {
        Vector eta = x * beta;
        Vector prob = (1.0 + (-eta.array()).exp()).inverse().matrix();
        Vector w = (prob.array() * (1.0 - prob.array())).matrix();
        Vector grad = x.transpose() * (y - prob) - ridge * beta;
        Matrix hess = x.transpose() * w.asDiagonal() * x + ridge * Matrix::Identity(p, p);
        Vector step = hess.ldlt().solve(grad);
        if (!step.allFinite()) break;
        beta += step;
        if (step.cwiseAbs().maxCoeff() < 1e-10) break;
    }
    return beta;
}

MultilevelSampler::MultilevelSampler(const GraphPopulation& data, ModelSpec spec, Hyperpriors hyper,
                                     ChainSettings settings)
    : data_(data), model_(std::move(spec), data.covariates), hyper_(std::move(hyper)), settings_(std::move(settings)) {
    settings_.validate();
    data_.validate();
    if (hyper_.dimension() != model_.dimension())
        throw ConfigError("hyperprior dimension " + std::to_string(hyper_.dimension()) +
                          " does not match model dimension " + std::to_string(model_.dimension()));
    hyper_.validate();
    if (data_.size() == 0) throw DataError("population is empty");
    if (settings_.kernel == LikelihoodKernel::exact && settings_.census->dimension() != model_.dimension())
        throw ConfigError("census dimension does not match model");
    aux_ = settings_.aux;
    aux_.init = SamplerConfig::Init::observed;
    observed_ = data_.graphs;
    for (const auto& g : observed_) observed_stats_.push_back(model_.summary(g));
    members_ = data_.members_by_group();
    initialise();
}

void MultilevelSampler::initialise() {
    const int p = model_.dimension();
    const int n = int(data_.size());
    const int J = int(members_.size());
    state_.theta.assign(n, Vector::Zero(p));
    if (settings_.init == ThetaInit::mple)
        for (int i = 0; i < n; ++i) state_.theta[i] = pseudo_likelihood_estimate(model_, observed_[i]);
    state_.mu_group.assign(J, Vector::Zero(p));
    for (int j = 0; j < J; ++j) {
        for (int i : members_[j]) state_.mu_group[j] += state_.theta[i];
        state_.mu_group[j] /= double(members_[j].size());
    }
    state_.mu_pop = Vector::Zero(p);
    for (const auto& m : state_.mu_group) state_.mu_pop += m / double(J);
    auto prior_mean = [p](double nu, const Matrix& psi) {
        return nu > p + 1 ? Matrix(psi / (nu - p - 1)) : psi;
    };
    state_.sigma_theta.assign(settings_.per_group_sigma_theta ? J : 1, prior_mean(hyper_.nu_theta, hyper_.psi_theta));
    state_.sigma_mu = prior_mean(hyper_.nu_mu, hyper_.psi_mu);

    theta_proposals_.assign(n, AdaptiveProposal::initial(p, settings_.adaptation));
    mu_proposals_.assign(J, AdaptiveProposal::initial(p, settings_.adaptation));
    theta_blocks_.assign(n, Block{RunningMoments(p), {}});
    mu_blocks_.assign(J, Block{RunningMoments(p), {}});
    for (int i = 0; i < n; ++i) theta_blocks_[i].counts.block = "theta." + std::to_string(i + 1);
    for (int j = 0; j < J; ++j) mu_blocks_[j].counts.block = "mu." + std::to_string(j + 1);
}

void MultilevelSampler::set_state(MultilevelState state) {
    state.validate(data_.group);
    if (state.dimension() != model_.dimension()) throw std::invalid_argument("state dimension mismatch");
    state_ = std::move(state);
}

void MultilevelSampler::set_observed(int i, const Graph& g) {
    if (g.n_nodes() != model_.n_nodes()) throw std::invalid_argument("graph size does not match model");
    observed_.at(i) = g;
    observed_stats_.at(i) = model_.summary(g);
}

double MultilevelSampler::log_likelihood_exact(const Vector& theta, const StatVector& stats) const {
    return theta.dot(stats) - settings_.census->log_partition(theta);
}

void MultilevelSampler::record_acceptance(Block& block, AdaptiveProposal& proposal, bool accepted, int iteration) {
    proposal.record(accepted);
    ++block.counts.proposed;
    block.counts.accepted += accepted;
    if (iteration > settings_.adaptation.window) {
        ++block.counts.proposed_frozen;
        block.counts.accepted_frozen += accepted;
    }
}

bool MultilevelSampler::update_theta_individual(int i, int iteration) {
    const int g = data_.group[i];
    NormalDensity prior(state_.mu_group[g - 1], state_.sigma_theta_for(g));
    Rng rng = make_stream(settings_.seed, std::uint64_t(iteration), StreamKind::theta_update, std::uint64_t(i));
    ExchangeProposal proposal = theta_proposals_[i].choose(rng);
    bool accepted = false;
    if (settings_.kernel == LikelihoodKernel::exchange) {
        ExchangeResult res = exchange_update(state_.theta[i], observed_[i], observed_stats_[i], std::cref(prior),
                                             proposal, model_, aux_, rng);
        accepted = res.accepted;
        state_.theta[i] = std::move(res.theta);
    } else {
        Vector candidate = proposal.draw(state_.theta[i], rng);
        double log_ratio = log_likelihood_exact(candidate, observed_stats_[i]) -
                           log_likelihood_exact(state_.theta[i], observed_stats_[i]) + prior(candidate) -
                           prior(state_.theta[i]);
        if (log_ratio >= 0.0 || uniform01(rng) < std::exp(log_ratio)) {
            state_.theta[i] = std::move(candidate);
            accepted = true;
        }
    }
    record_acceptance(theta_blocks_[i], theta_proposals_[i], accepted, iteration);
    return accepted;
}

std::vector<bool> MultilevelSampler::update_mu_noncentered(int iteration) {
    const int J = int(members_.size());
    const int n = int(data_.size());
    std::vector<Vector> deviation(n);
    for (int i = 0; i < n; ++i) deviation[i] = state_.deviation(i, data_.group);

    std::vector<Rng> group_rng;
    std::vector<Vector> candidate(J);
    for (int j = 0; j < J; ++j) {
        group_rng.push_back(make_stream(settings_.seed, std::uint64_t(iteration), StreamKind::ncp_proposal, std::uint64_t(j)));
        candidate[j] = mu_proposals_[j].choose(group_rng[j]).draw(state_.mu_group[j], group_rng[j]);
    }

    // Per-network contribution to the log acceptance ratio.
    std::vector<double> contribution(n, 0.0);
    if (settings_.kernel == LikelihoodKernel::exchange) {
        parallel_for(std::size_t(n), settings_.workers, [&](std::size_t k) {
            const int i = int(k);
            const int j = data_.group[i] - 1;
            Rng rng = make_stream(settings_.seed, std::uint64_t(iteration), StreamKind::ncp_auxiliary, k);
            Vector aux_theta = candidate[j] + deviation[i];
            SimulatedGraph aux = simulate_ergm(model_, aux_theta, aux_, rng, &observed_[i], &observed_stats_[i]);
            contribution[i] = (candidate[j] - state_.mu_group[j]).dot(observed_stats_[i] - aux.stats);
        });
    } else {
        for (int i = 0; i < n; ++i) {
            const int j = data_.group[i] - 1;
            contribution[i] = log_likelihood_exact(candidate[j] + deviation[i], observed_stats_[i]) -
                              log_likelihood_exact(state_.mu_group[j] + deviation[i], observed_stats_[i]);
        }
    }

    NormalDensity prior(state_.mu_pop, state_.sigma_mu);
    std::vector<bool> accepted(J, false);
    for (int j = 0; j < J; ++j) {
        double log_ratio = prior(candidate[j]) - prior(state_.mu_group[j]);
        for (int i : members_[j]) log_ratio += contribution[i];
        if (log_ratio >= 0.0 || uniform01(group_rng[j]) < std::exp(log_ratio)) {
            state_.mu_group[j] = candidate[j];
            for (int i : members_[j]) state_.theta[i] = candidate[j] + deviation[i];
            accepted[j] = true;
        }
        record_acceptance(mu_blocks_[j], mu_proposals_[j], accepted[j], iteration);
    }
    return accepted;
}

void MultilevelSampler::sweep(int iteration) {
    const auto it = std::uint64_t(iteration);
    const int n = int(data_.size());
    const int J = int(members_.size());
    {
        Rng rng = make_stream(settings_.seed, it, StreamKind::sigma_theta);
        state_.sigma_theta = update_sigma_theta(state_, data_.group, hyper_, rng);
    }
    {
        Rng rng = make_stream(settings_.seed, it, StreamKind::sigma_mu);
        state_.sigma_mu = update_sigma_mu(state_, hyper_, rng);
    }
    {
        Rng rng = make_stream(settings_.seed, it, StreamKind::pop_mean);
        state_.mu_pop = update_pop_mean(state_, hyper_, rng);
    }
    last_flags_.assign(std::size_t(n + J), 0);
    parallel_for(std::size_t(n), settings_.workers,
                 [&](std::size_t i) { last_flags_[i] = update_theta_individual(int(i), iteration) ? 1 : 0; });
    {
        Rng rng = make_stream(settings_.seed, it, StreamKind::group_means);
        state_.mu_group = update_group_means_centered(state_, data_.group, hyper_, rng);
    }
    if (settings_.interweave) {
        std::vector<bool> acc = update_mu_noncentered(iteration);
        for (int j = 0; j < J; ++j) last_flags_[std::size_t(n + j)] = acc[j] ? 1 : 0;
    }
}

void MultilevelSampler::end_iteration(int iteration) {
    const auto& ad = settings_.adaptation;
    for (std::size_t i = 0; i < theta_blocks_.size(); ++i) theta_blocks_[i].history.add(state_.theta[i]);
    for (std::size_t j = 0; j < mu_blocks_.size(); ++j) mu_blocks_[j].history.add(state_.mu_group[j]);
    if (iteration > ad.window || iteration % ad.interval != 0) return;
    for (std::size_t i = 0; i < theta_blocks_.size(); ++i)
        theta_proposals_[i] =
            adapt_proposal(theta_proposals_[i], theta_blocks_[i].history, theta_proposals_[i].window_rate(), ad);
    if (settings_.interweave)
        for (std::size_t j = 0; j < mu_blocks_.size(); ++j)
            mu_proposals_[j] = adapt_proposal(mu_proposals_[j], mu_blocks_[j].history, mu_proposals_[j].window_rate(), ad);
}

PosteriorTrace MultilevelSampler::run() {
    PosteriorTrace trace;
    trace.term_names = model_.spec().names();
    trace.n_groups = int(members_.size());
    trace.n_networks = int(data_.size());
    trace.shared_sigma_theta = !settings_.per_group_sigma_theta;
    std::size_t retained = 0;
    for (int k = 1; k <= settings_.iterations; ++k) {
        sweep(k);
        end_iteration(k);
        if (k <= settings_.burn_in || (k - settings_.burn_in) % settings_.thin != 0) continue;
        trace.iterations.push_back(k);
        trace.mu_group.push_back(state_.mu_group);
        trace.mu_pop.push_back(state_.mu_pop);
        trace.sigma_theta.push_back(state_.sigma_theta);
        trace.sigma_mu.push_back(state_.sigma_mu);
        trace.accepted.push_back(last_flags_);
        if (retained % std::size_t(settings_.theta_thin) == 0) {
            trace.theta_iterations.push_back(k);
            trace.theta.push_back(state_.theta);
        }
        ++retained;
    }
    for (const auto& b : theta_blocks_) trace.acceptance.push_back(b.counts);
    if (settings_.interweave)
        for (const auto& b : mu_blocks_) trace.acceptance.push_back(b.counts);
    return trace;
}

PosteriorTrace run_chain(const GraphPopulation& data, const ModelSpec& spec, const Hyperpriors& hyper,
                         const ChainSettings& settings) {
    MultilevelSampler sampler(data, spec, hyper, settings);
    return sampler.run();
}

}  // namespace popergm
