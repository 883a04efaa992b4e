#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracle.hpp"
#include "popergm/engine.hpp"
#include "popergm/error.hpp"

using namespace popergm;

namespace {

// Population of edges-only networks drawn exactly (independent dyads).
GraphPopulation bernoulli_population(int n_nodes, const std::vector<double>& theta, const std::vector<int>& group,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GraphPopulation pop;
    pop.covariates = NodeCovariates(n_nodes);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        std::bernoulli_distribution coin(oracle::logistic(theta[k]));
        Graph g(n_nodes);
        for (auto [i, j] : all_dyads(n_nodes))
            if (coin(rng)) g.set_edge(i, j, true);
        pop.graphs.push_back(g);
        pop.subjects.push_back("s" + std::to_string(k + 1));
    }
    pop.group = group;
    return pop;
}

ChainSettings quick_settings(int iterations, int burn_in) {
    ChainSettings s;
    s.iterations = iterations;
    s.burn_in = burn_in;
    s.adaptation.window = std::min(1000, burn_in);
    s.workers = 1;
    return s;
}

double mean_of(const PosteriorTrace& t, int group, int coord) {
    double s = 0;
    for (const auto& rec : t.mu_group) s += rec[group][coord];
    return s / double(t.size());
}

// Batch-means standard error of a correlated series.
double batch_se(const std::vector<double>& x, int batches = 50) {
    const std::size_t len = x.size() / batches;
    std::vector<double> means(batches, 0.0);
    for (int b = 0; b < batches; ++b) {
        for (std::size_t k = 0; k < len; ++k) means[b] += x[b * len + k];
        means[b] /= double(len);
    }
    double m = 0, v = 0;
    for (double b : means) m += b / batches;
    for (double b : means) v += (b - m) * (b - m) / (batches - 1);
    return std::sqrt(v / batches);
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("settings validation") {
    ChainSettings s;
    s.iterations = 100;
    s.burn_in = 100;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.burn_in = 99;
    CHECK_NOTHROW(s.validate());
    s.thin = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.thin = 1;
    s.kernel = LikelihoodKernel::exact;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("trace length, columns and table round trip") {
    GraphPopulation pop = bernoulli_population(6, {-1.0, -0.5, 0.0}, {1, 2, 2}, 1);
    ModelSpec spec = ModelSpec::parse({"edges"});
    ChainSettings one = quick_settings(11, 10);
    PosteriorTrace t = run_chain(pop, spec, Hyperpriors::defaults(1), one);
    CHECK(t.size() == 1);
    CHECK(t.iterations == std::vector<int>{11});

    ChainSettings s = quick_settings(60, 20);
    s.thin = 4;
    s.theta_thin = 3;
    t = run_chain(pop, spec, Hyperpriors::defaults(1), s);
    CHECK(t.size() == 10);
    CHECK(t.iterations.front() == 24);
    CHECK(t.theta.size() == 4);
    CHECK(t.accepted.front().size() == 3 + 2);
    CHECK(t.column_names() == std::vector<std::string>{"iteration", "mu.1.edges", "mu.2.edges", "mu_pop.edges",
                                                       "sigma_theta.1.1", "sigma_mu.1.1"});
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < t.size(); ++r) rows.push_back(t.row(r));
    PosteriorTrace back = PosteriorTrace::from_table(t.column_names(), rows);
    CHECK(back.mu_group == t.mu_group);
    CHECK(back.n_groups == 2);
    CHECK(back.term_names == t.term_names);

    REQUIRE(t.acceptance.size() == 5);
    for (const auto& b : t.acceptance) {
        CHECK(b.proposed == 60);
        CHECK(b.proposed_frozen == 60 - s.adaptation.window);
    }

    s.per_group_sigma_theta = true;
    t = run_chain(pop, spec, Hyperpriors::defaults(1), s);
    CHECK(t.column_names()[4] == "sigma_theta.g1.1.1");
    CHECK(t.sigma_theta.front().size() == 2);
}

TEST_CASE("fixed seed gives identical traces, whatever the worker count") {
    GraphPopulation pop = bernoulli_population(8, {-1.0, -0.8, -1.2, -0.5}, {1, 1, 2, 2}, 2);
    ModelSpec spec = ModelSpec::parse({"edges", "gwesp:0.5"});
    ChainSettings s = quick_settings(200, 100);
    s.adaptation.window = 100;
    PosteriorTrace a = run_chain(pop, spec, Hyperpriors::defaults(2), s);
    PosteriorTrace b = run_chain(pop, spec, Hyperpriors::defaults(2), s);
    s.workers = 3;
    PosteriorTrace c = run_chain(pop, spec, Hyperpriors::defaults(2), s);
    CHECK(a == b);
    CHECK(a == c);
    s.seed = 2;
    CHECK_FALSE(a == run_chain(pop, spec, Hyperpriors::defaults(2), s));
}

TEST_CASE("a vanishing non-centred step is always accepted") {
    GraphPopulation pop = bernoulli_population(6, {-1.0, -0.5}, {1, 1}, 3);
    ChainSettings s = quick_settings(50, 10);
    s.adaptation.window = 0;
    s.adaptation.initial_scale = 1e-200;
    MultilevelSampler sampler(pop, ModelSpec::parse({"edges"}), Hyperpriors::defaults(1), s);
    for (int k = 1; k <= 20; ++k) {
        MultilevelState before = sampler.state();
        std::vector<bool> acc = sampler.update_mu_noncentered(k);
        CHECK(acc == std::vector<bool>{true});
        // deviations are preserved by the move
        for (int i = 0; i < 2; ++i)
            CHECK((sampler.state().theta[i] - sampler.state().mu_group[0] - (before.theta[i] - before.mu_group[0]))
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
    }
}

TEST_CASE("data/model mismatches are reported") {
    GraphPopulation pop = bernoulli_population(6, {-1.0}, {1}, 4);
    ChainSettings s = quick_settings(20, 10);
    CHECK_THROWS_AS(MultilevelSampler(pop, ModelSpec::parse({"edges"}), Hyperpriors::defaults(2), s), ConfigError);
    CHECK_THROWS(MultilevelSampler(pop, ModelSpec::parse({"nodematch:hemisphere"}), Hyperpriors::defaults(1), s));
    GraphPopulation empty;
    empty.covariates = NodeCovariates(6);
    CHECK_THROWS(MultilevelSampler(empty, ModelSpec::parse({"edges"}), Hyperpriors::defaults(1), s));
}

TEST_CASE("pseudo-likelihood start for an edges-only model is the logit of the density") {
    GraphPopulation pop = bernoulli_population(20, {-1.3}, {1}, 5);
    Model model(ModelSpec::parse({"edges"}), pop.covariates);
    double d = density(pop.graphs[0]);
    CHECK(pseudo_likelihood_estimate(model, pop.graphs[0], 0.0)[0] == doctest::Approx(std::log(d / (1 - d))).epsilon(1e-6));
}

TEST_CASE("exchange and exact-likelihood multilevel samplers agree") {
    const int n_nodes = 5;
    GraphPopulation pop = bernoulli_population(n_nodes, {-1.0, -0.6, -1.4, -0.8, -1.1, -0.3}, {1, 1, 1, 1, 1, 1}, 6);
    ModelSpec spec = ModelSpec::parse({"edges"});
    Hyperpriors h = Hyperpriors::defaults(1);
    ChainSettings s = quick_settings(40000, 2000);
    PosteriorTrace ex = run_chain(pop, spec, h, s);
    s.kernel = LikelihoodKernel::exact;
    s.census = std::make_shared<StatisticCensus>(spec, pop.covariates);
    const auto before = partition_evaluations();
    PosteriorTrace exact = run_chain(pop, spec, h, s);
    CHECK(partition_evaluations() > before);
    double a = mean_of(ex, 0, 0), b = mean_of(exact, 0, 0);
    MESSAGE("posterior mean of mu: exchange " << a << ", exact " << b);
    CHECK(std::abs(a - b) < 0.05);
}

TEST_CASE("centred-only and interweaving chains agree") {
    GraphPopulation pop = bernoulli_population(6, {-1.0, -0.6, -1.4, -0.8}, {1, 1, 1, 1}, 7);
    ModelSpec spec = ModelSpec::parse({"edges"});
    ChainSettings s = quick_settings(30000, 2000);
    PosteriorTrace asis = run_chain(pop, spec, Hyperpriors::defaults(1), s);
    s.interweave = false;
    PosteriorTrace cp = run_chain(pop, spec, Hyperpriors::defaults(1), s);
    CHECK(cp.acceptance.size() == 4);
    std::vector<double> xa, xc;
    for (const auto& r : asis.mu_group) xa.push_back(r[0][0]);
    for (const auto& r : cp.mu_group) xc.push_back(r[0][0]);
    double se = std::hypot(batch_se(xa), batch_se(xc));
    MESSAGE("ASIS " << mean_of(asis, 0, 0) << " CP " << mean_of(cp, 0, 0) << " se " << se);
    CHECK(std::abs(mean_of(asis, 0, 0) - mean_of(cp, 0, 0)) < 3 * se);
}

TEST_CASE("successive-conditional simulation reproduces the prior") {
    // Alternate a full sweep with exact re-simulation of every network from
    // its current theta; the chain then targets the joint prior, so sampled
    // parameters must have the analytic prior moments.
    const int n_nodes = 5, n = 3;
    Hyperpriors h = Hyperpriors::defaults(1);
    h.lambda(0, 0) = 1.0;
    h.nu_theta = h.nu_mu = 10.0;
    const double e_sigma = 1.0 / (10.0 - 2.0);  // IG(5, 0.5) mean
    GraphPopulation pop = bernoulli_population(n_nodes, {0.0, 0.0, 0.0}, {1, 1, 1}, 8);
    ChainSettings s = quick_settings(10, 0);
    s.adaptation.window = 0;
    s.adaptation.initial_scale = 100.0;  // fallback kernel sd 1
    s.seed = 11;
    MultilevelSampler sampler(pop, ModelSpec::parse({"edges"}), h, s);

    std::mt19937_64 rng(12);
    const int iters = 60000;
    std::vector<double> mu, sig_t, sig_m, theta, theta2;
    for (int k = 1; k <= iters; ++k) {
        sampler.sweep(k);
        for (int i = 0; i < n; ++i) {
            std::bernoulli_distribution coin(oracle::logistic(sampler.state().theta[i][0]));
            Graph g(n_nodes);
            for (auto [a, b] : all_dyads(n_nodes))
                if (coin(rng)) g.set_edge(a, b, true);
            sampler.set_observed(i, g);
        }
        const auto& st = sampler.state();
        mu.push_back(st.mu_group[0][0]);
        sig_t.push_back(st.sigma_theta[0](0, 0));
        sig_m.push_back(st.sigma_mu(0, 0));
        theta.push_back(st.theta[0][0]);
        theta2.push_back(st.theta[0][0] * st.theta[0][0]);
    }
    auto mean = [](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v;
        return s / double(x.size());
    };
    auto z = [&](const std::vector<double>& x, double target) { return (mean(x) - target) / batch_se(x); };
    const double var_theta = 1.0 + 2 * e_sigma;
    MESSAGE("z: mu " << z(mu, 0) << " sigma_theta " << z(sig_t, e_sigma) << " sigma_mu " << z(sig_m, e_sigma)
                     << " theta " << z(theta, 0) << " theta^2 " << z(theta2, var_theta));
    CHECK(std::abs(z(mu, 0.0)) < 4);
    CHECK(std::abs(z(sig_t, e_sigma)) < 4);
    CHECK(std::abs(z(sig_m, e_sigma)) < 4);
    CHECK(std::abs(z(theta, 0.0)) < 4);
    CHECK(std::abs(z(theta2, var_theta)) < 4);
}

}
