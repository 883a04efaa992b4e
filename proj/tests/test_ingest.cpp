#include <doctest.h>

#include <cmath>
#include <random>

#include "popergm/error.hpp"
#include "popergm/ingest.hpp"

using namespace popergm;

namespace {

Matrix correlation(int n, const std::vector<double>& upper) {
    Matrix c = Matrix::Identity(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j, ++k) c(i, j) = c(j, i) = upper[k];
    return c;
}

CorrelationSet single(const Matrix& c) { return CorrelationSet{{c}, {"s1"}, {1}}; }

// Correlation matrices of random time series with a shared factor.
CorrelationSet random_set(int subjects, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    CorrelationSet cs;
    const int t = 40;
    for (int s = 0; s < subjects; ++s) {
        Matrix x(t, n);
        for (int r = 0; r < t; ++r) {
            double f = normal(rng);
            for (int c = 0; c < n; ++c) x(r, c) = 0.4 * f + normal(rng);
        }
        Matrix centred = x.rowwise() - x.colwise().mean();
        Matrix cov = centred.transpose() * centred;
        Vector sd = cov.diagonal().cwiseSqrt();
        Matrix c = cov.array() / (sd * sd.transpose()).array();
        c.diagonal().setOnes();
        cs.matrices.push_back(c);
        cs.subjects.push_back("s" + std::to_string(s + 1));
        cs.group.push_back(1 + s % 2);
    }
    return cs;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("thresholding examples") {
    CorrelationSet cs = single(correlation(3, {0.9, 0.2, 0.5}));
    CHECK(threshold_networks(cs, 0.5).graphs[0].edge_count() == 2);
    CHECK(threshold_networks(cs, std::nextafter(1.0, 2.0)).graphs[0].edge_count() == 0);
    CHECK(threshold_networks(cs, -1.0).graphs[0].edge_count() == 3);
    ThresholdOptions abs;
    abs.absolute = true;
    CorrelationSet neg = single(correlation(3, {-0.9, 0.2, 0.5}));
    CHECK(threshold_networks(neg, 0.5).graphs[0].edge_count() == 1);
    CHECK(threshold_networks(neg, 0.5, abs).graphs[0].edge_count() == 2);
    CHECK_THROWS(threshold_networks(cs, std::nan("")));
}

TEST_CASE("malformed matrices are data errors") {
    Matrix asym = correlation(3, {0.9, 0.2, 0.5});
    asym(0, 1) = 0.3;
    CHECK_THROWS_AS(single(asym).validate(), DataError);
    Matrix diag = correlation(3, {0.9, 0.2, 0.5});
    diag(1, 1) = 0.5;
    CHECK_THROWS_AS(single(diag).validate(), DataError);
    CHECK_THROWS_AS(single(correlation(3, {1.5, 0.2, 0.5})).validate(), DataError);
    CHECK_THROWS_AS(single(Matrix::Identity(2, 3)).validate(), DataError);
    CHECK_THROWS_AS(threshold_networks(single(asym), 0.1), DataError);
}

TEST_CASE("threshold solving examples") {
    CorrelationSet cs = single(correlation(3, {0.9, 0.8, 0.7}));
    double r = solve_threshold_for_degree(cs, 2.0);
    CHECK(r == 0.7);
    GraphPopulation pop = threshold_networks(cs, r);
    CHECK(pop.graphs[0].edge_count() == 3);
    CHECK(mean_degree(pop) == doctest::Approx(2.0));

    CorrelationSet four = single(correlation(4, {0.9, 0.8, 0.7, 0.2, 0.1, 0.05}));
    r = solve_threshold_for_degree(four, 1.5);
    CHECK(r == 0.7);  // 3 edges on 4 nodes
    CHECK(mean_degree(threshold_networks(four, r)) == doctest::Approx(1.5));

    double none = solve_threshold_for_degree(cs, 0.0);
    CHECK(none > 0.9);
    CHECK(threshold_networks(cs, none).graphs[0].edge_count() == 0);
    CHECK(solve_threshold_for_degree(cs, 2.0) == 0.7);  // N - 1: the minimum
    CHECK_THROWS(solve_threshold_for_degree(cs, 2.5));
    CHECK_THROWS(solve_threshold_for_degree(cs, -0.1));
}

TEST_CASE("ties at the cut are all kept") {
    CorrelationSet cs = single(correlation(4, {0.5, 0.5, 0.5, 0.5, 0.1, 0.1}));
    double r = solve_threshold_for_degree(cs, 1.0);  // asks for 2 edges
    CHECK(r == 0.5);
    CHECK(threshold_networks(cs, r).graphs[0].edge_count() == 4);
}

TEST_CASE("edge sets are nested as the threshold rises") {
    CorrelationSet cs = random_set(4, 15, 1);
    std::vector<double> rs{-0.5, -0.1, 0.0, 0.1, 0.2, 0.35, 0.6};
    for (std::size_t k = 0; k + 1 < rs.size(); ++k) {
        GraphPopulation lo = threshold_networks(cs, rs[k]), hi = threshold_networks(cs, rs[k + 1]);
        for (std::size_t s = 0; s < cs.matrices.size(); ++s)
            for (auto [i, j] : hi.graphs[s].edges()) CHECK(lo.graphs[s].has_edge(i, j));
    }
}

TEST_CASE("achieved mean degree is within one edge quantum above the target") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int subjects = 2 + int(seed % 5), n = 10 + int(seed % 7);
        CorrelationSet cs = random_set(subjects, n, seed);
        for (double target : {0.5, 1.0, 3.0, 4.7}) {
            double r = solve_threshold_for_degree(cs, target);
            GraphPopulation pop = threshold_networks(cs, r);
            double achieved = mean_degree(pop);
            CHECK(achieved >= target - 1e-12);
            CHECK(achieved <= target + 2.0 / (subjects * n) + 1e-12);
            CHECK(pop.group == cs.group);
            CHECK(pop.subjects == cs.subjects);

            std::vector<double> each = solve_thresholds_per_network(cs, target);
            GraphPopulation per = threshold_networks(cs, each);
            for (const auto& g : per.graphs) {
                double d = 2.0 * double(g.edge_count()) / n;
                CHECK(d >= target - 1e-12);
                CHECK(d <= target + 2.0 / n + 1e-12);
            }
        }
    }
}

}
