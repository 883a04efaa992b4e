#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "popergm/gof.hpp"

using namespace popergm;

namespace {

Graph graph_of(int n, std::vector<Dyad> edges) { return from_edge_list(n, edges); }

// Floyd-Warshall distances as an independent geodesic oracle.
std::vector<std::vector<int>> all_pairs(const oracle::Adjacency& a) {
    const int n = int(a.size()), inf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (int j = 0; j < n; ++j)
            if (a[i][j]) d[i][j] = 1;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

PosteriorTrace single_draw_trace(const Vector& mu, const std::vector<std::string>& names) {
    PosteriorTrace t;
    t.term_names = names;
    t.n_groups = 1;
    t.iterations = {1};
    t.mu_group = {{mu}};
    return t;
}

}  // namespace

TEST_SUITE("gof") {

TEST_CASE("degree distribution examples") {
    CHECK(degree_distribution(Graph(4)).at(0) == 4);
    auto tri = degree_distribution(graph_of(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(tri.at(2) == 3);
    CHECK(tri.total() == 3);
    auto star = degree_distribution(graph_of(4, {{0, 1}, {0, 2}, {0, 3}}));
    CHECK(star.at(3) == 1);
    CHECK(star.at(1) == 3);
    CHECK(star.at(0) == 0);
}

TEST_CASE("geodesic distribution examples") {
    auto tri = geodesic_distribution(graph_of(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(tri.at(1) == 3);
    CHECK(tri.unreachable == 0);
    auto path = geodesic_distribution(graph_of(3, {{0, 1}, {1, 2}}));
    CHECK(path.at(1) == 2);
    CHECK(path.at(2) == 1);
    auto two = geodesic_distribution(graph_of(4, {{0, 1}, {2, 3}}));
    CHECK(two.at(1) == 2);
    CHECK(two.unreachable == 4);
    CHECK(two.at(0) == 0);
}

TEST_CASE("edgewise shared partner distribution examples") {
    CHECK(esp_distribution(graph_of(3, {{0, 1}})).at(0) == 1);
    CHECK(esp_distribution(graph_of(3, {{0, 1}, {1, 2}, {0, 2}})).at(1) == 3);
    std::vector<Dyad> k4;
    for (auto d : all_dyads(4)) k4.push_back(d);
    auto esp = esp_distribution(graph_of(4, k4));
    CHECK(esp.at(2) == 6);
    CHECK(esp.total() == 6);
}

TEST_CASE("sum rules, oracle agreement and the GWESP identity on random graphs") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> size(2, 25);
    std::uniform_real_distribution<double> prob(0.0, 0.6);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = size(rng);
        oracle::Adjacency a = oracle::random_adjacency(n, prob(rng), rng);
        Graph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (a[i][j]) g.set_edge(i, j, true);
        auto deg = degree_distribution(g);
        auto geo = geodesic_distribution(g);
        auto esp = esp_distribution(g);
        CHECK(deg.total() == n);
        CHECK(geo.total() == std::int64_t(n) * (n - 1) / 2);
        CHECK(esp.total() == g.edge_count());
        CHECK(geo.at(1) == g.edge_count());

        auto d = all_pairs(a);
        std::vector<std::int64_t> ref(std::size_t(n), 0);
        std::int64_t unreachable = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (d[i][j] >= (1 << 20))
                    ++unreachable;
                else
                    ++ref[std::size_t(d[i][j])];
            }
        CHECK(geo.unreachable == unreachable);
        for (int b = 0; b < n; ++b) CHECK(geo.at(std::size_t(b)) == ref[std::size_t(b)]);

        const double decay = 0.9;
        auto w = gwesp_weights(decay, n);
        double weighted = 0.0;
        for (std::size_t k = 0; k < esp.counts.size(); ++k) weighted += w[k] * double(esp.counts[k]);
        double direct = summary_statistics(g, NodeCovariates(n), ModelSpec::parse({"gwesp:0.9"}))[0];
        CHECK(std::abs(weighted - direct) < 1e-10);
        CHECK(std::abs(weighted - oracle::gwesp(a, decay)) < 1e-10);
    }
}

TEST_CASE("empirical quantiles interpolate linearly between order statistics") {
    CHECK(quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({4, 1, 3, 2}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({7}, 0.05) == 7);
    CHECK(quantile({1, 2, 3, 4, 5}, 1.0) == 5);
    CHECK_THROWS(quantile({}, 0.5));
}

TEST_CASE("envelopes from identical simulations collapse; observed summaries") {
    Graph tri = graph_of(4, {{0, 1}, {1, 2}, {0, 2}});
    Graph edge = graph_of(4, {{0, 1}});
    std::vector<Graph> sims(5, tri);
    std::vector<Graph> obs{tri, edge, Graph(4)};
    for (MetricKind kind : {MetricKind::degree, MetricKind::geodesic, MetricKind::esp}) {
        PredictiveEnvelope env = build_envelope(sims, obs, kind, 0.9);
        CHECK(env.level == 0.9);
        for (const auto& row : env.rows) {
            CHECK(row.sim_lower == row.sim_upper);
            CHECK(row.obs_q1 <= row.obs_median);
            CHECK(row.obs_median <= row.obs_q3);
        }
    }
    PredictiveEnvelope deg = build_envelope(sims, obs, MetricKind::degree, 0.95);
    REQUIRE(deg.rows.size() == 3);  // degrees 0..2
    CHECK(deg.rows[0].bin == "0");
    CHECK(deg.rows[0].sim_lower == 1);
    CHECK(deg.rows[0].obs_median == 2);  // 1, 2 and 4 isolated nodes
    PredictiveEnvelope geo = build_envelope(sims, obs, MetricKind::geodesic, 0.9);
    CHECK(geo.rows.front().bin == "1");
    CHECK(geo.rows.back().bin == "inf");
    CHECK(geo.rows.back().sim_upper == 3);
    CHECK_THROWS(build_envelope({}, obs, MetricKind::degree, 0.9));
    CHECK_THROWS(build_envelope(sims, obs, MetricKind::degree, 1.0));
}

TEST_CASE("posterior predictive draws") {
    ModelSpec spec = ModelSpec::parse({"edges", "gwesp:0.9"});
    Model model(spec, NodeCovariates(12));
    Vector mu(2);
    mu << -2.0, 0.3;
    PosteriorTrace one = single_draw_trace(mu, spec.names());
    SamplerConfig sc;
    sc.burn_in = 2000;
    auto single = posterior_predictive(one, 1, 1, model, sc, 3);
    CHECK(single.size() == 1);
    Rng rng = make_stream(3, 0, StreamKind::predictive, 0);
    std::uniform_int_distribution<std::size_t> pick(0, 0);
    pick(rng);
    CHECK(single[0] == simulate_ergm(model, mu, sc, rng).graph);

    auto a = posterior_predictive(one, 1, 20, model, sc, 4, 1);
    auto b = posterior_predictive(one, 1, 20, model, sc, 4, 3);
    CHECK(a == b);

    PosteriorTrace empty;
    empty.n_groups = 1;
    CHECK_THROWS(posterior_predictive(empty, 1, 5, model, sc, 1));
    CHECK_THROWS(posterior_predictive(one, 2, 5, model, sc, 1));
    CHECK_THROWS(posterior_predictive(one, 1, 0, model, sc, 1));
    SamplerConfig from_obs;
    from_obs.init = SamplerConfig::Init::observed;
    CHECK_THROWS(posterior_predictive(one, 1, 5, model, from_obs, 1));
}

TEST_CASE("a well-specified model places observed medians inside its envelopes") {
    const int n = 20;
    ModelSpec spec = ModelSpec::parse({"edges", "nodematch:hemisphere", "gwesp:0.9"});
    NodeCovariates cov = hemisphere_covariates(n);
    Model model(spec, cov);
    Vector mu(3);
    mu << -2.5, 0.5, 0.4;
    SamplerConfig sc;
    sc.burn_in = 50 * 190;
    GraphPopulation observed = simulate_population(spec, cov, std::vector<Vector>(10, mu), sc, 5);
    auto sims = posterior_predictive(single_draw_trace(mu, spec.names()), 1, 100, model, sc, 6);
    int rows = 0, inside = 0;
    for (MetricKind kind : {MetricKind::degree, MetricKind::geodesic, MetricKind::esp}) {
        PredictiveEnvelope env = build_envelope(sims, observed.graphs, kind, 0.9);
        for (const auto& r : env.rows) {
            ++rows;
            inside += r.obs_median >= r.sim_lower && r.obs_median <= r.sim_upper;
        }
    }
    MESSAGE(inside << " of " << rows << " observed medians inside");
    CHECK(double(inside) / rows >= 0.8);
}

}
