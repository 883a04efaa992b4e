#include <doctest.h>

#include <random>
#include <stdexcept>

#include "oracle.hpp"
#include "popergm/graph.hpp"
#include "popergm/model.hpp"

using namespace popergm;

namespace {

void check_invariants(const Graph& g) {
    const int n = g.n_nodes();
    std::int64_t count = 0;
    for (int i = 0; i < n; ++i) {
        CHECK_FALSE(g.has_edge(i, i));
        for (int j = 0; j < n; ++j) {
            CHECK(g.has_edge(i, j) == g.has_edge(j, i));
            if (i < j && g.has_edge(i, j)) ++count;
        }
    }
    CHECK(count == g.edge_count());
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("toggle on the empty graph adds one edge") {
    Graph g = toggle_edge(Graph(3), 0, 1);
    CHECK(g.edge_count() == 1);
    CHECK(g.has_edge(0, 1));
    CHECK(g.edges() == std::vector<Dyad>{{0, 1}});
}

TEST_CASE("toggle on a triangle leaves a path through the third node") {
    std::vector<Dyad> tri{{0, 1}, {0, 2}, {1, 2}};
    Graph g = toggle_edge(from_edge_list(3, tri), 0, 1);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("toggle is an involution and preserves invariants on every graph up to six nodes") {
    for (int n = 2; n <= 6; ++n) {
        const int dyads = n * (n - 1) / 2;
        std::uint64_t step = n == 6 ? 37 : 1;  // subsample the 32768 six-node graphs
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dyads); mask += step) {
            Graph g = graph_from_dyad_mask(n, mask);
            check_invariants(g);
            for (auto [i, j] : all_dyads(n)) {
                Graph once = toggle_edge(g, i, j);
                check_invariants(once);
                CHECK(std::abs(once.edge_count() - g.edge_count()) == 1);
                CHECK(toggle_edge(once, j, i) == g);
            }
        }
    }
}

TEST_CASE("toggle rejects bad indices") {
    CHECK_THROWS_AS(toggle_edge(Graph(3), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(toggle_edge(Graph(3), 0, 3), std::out_of_range);
    CHECK_THROWS_AS(toggle_edge(Graph(3), -1, 2), std::out_of_range);
}

TEST_CASE("from_edge_list collapses duplicates and validates pairs") {
    std::vector<Dyad> one{{0, 1}};
    CHECK(from_edge_list(3, one).edge_count() == 1);
    std::vector<Dyad> dup{{0, 1}, {1, 0}};
    CHECK(from_edge_list(3, dup).edge_count() == 1);
    CHECK(from_edge_list(4, {}).edge_count() == 0);
    std::vector<Dyad> loop{{2, 2}};
    CHECK_THROWS(from_edge_list(3, loop));
    std::vector<Dyad> out{{0, 5}};
    CHECK_THROWS(from_edge_list(3, out));
}

TEST_CASE("density") {
    Graph complete(5);
    for (auto [i, j] : all_dyads(5)) complete.set_edge(i, j, true);
    CHECK(density(complete) == doctest::Approx(1.0));
    CHECK(density(Graph(5)) == 0.0);
    std::vector<Dyad> path{{0, 2}, {2, 1}};
    CHECK(density(from_edge_list(3, path)) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS(density(Graph(1)));
}

TEST_CASE("neighbour iteration agrees with the oracle on larger graphs") {
    std::mt19937_64 rng(11);
    for (int n : {7, 64, 65, 130}) {
        auto a = oracle::random_adjacency(n, 0.2, rng);
        Graph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (a[i][j]) g.set_edge(i, j, true);
        CHECK(g.edge_count() == oracle::edges(a));
        for (int i = 0; i < n; ++i) {
            int deg = 0;
            g.for_each_neighbor(i, [&](int v) { CHECK(a[i][v] == 1); ++deg; });
            CHECK(deg == g.degree(i));
            int j = (i * 7 + 3) % n;
            if (j != i) CHECK(g.common_neighbors(i, j) == oracle::shared_partners(a, i, j));
        }
    }
}

TEST_CASE("covariates: attributes and homotopy partners") {
    NodeCovariates cov(4);
    cov.set_attribute("label", {"L", "L", "R", "R"});
    CHECK(cov.attribute_codes("label")[0] == cov.attribute_codes("label")[1]);
    CHECK(cov.attribute_codes("label")[0] != cov.attribute_codes("label")[2]);
    CHECK(cov.attribute_values("label") == std::vector<std::string>{"L", "L", "R", "R"});
    CHECK_THROWS(cov.set_attribute("bad", {"a"}));
    CHECK_THROWS(cov.attribute_codes("missing"));

    CHECK(cov.homotopy_partner() == std::vector<int>{2, 3, 0, 1});
    CHECK_THROWS(cov.set_homotopy_partner({1, 0, 2, 3}));  // fixed points
    CHECK_THROWS(cov.set_homotopy_partner({1, 2, 3, 0}));  // not an involution
    cov.set_homotopy_partner({1, 0, 3, 2});
    CHECK(cov.homotopy_partner() == std::vector<int>{1, 0, 3, 2});
    CHECK_THROWS(NodeCovariates(5).homotopy_partner());

    NodeCovariates hemi = hemisphere_covariates(6);
    CHECK(hemi.attribute_values("hemisphere") ==
          std::vector<std::string>{"left", "left", "left", "right", "right", "right"});
}

TEST_CASE("population validation") {
    GraphPopulation pop;
    pop.covariates = NodeCovariates(3);
    pop.graphs = {Graph(3), Graph(3), Graph(3)};
    pop.group = {1, 2, 1};
    pop.subjects = {"a", "b", "c"};
    CHECK_NOTHROW(pop.validate());
    CHECK(pop.n_groups() == 2);
    CHECK(pop.members_by_group() == std::vector<std::vector<int>>{{0, 2}, {1}});
    pop.group = {1, 3, 1};
    CHECK_THROWS(pop.validate());  // group 2 empty
    pop.group = {1, 1, 1};
    pop.graphs[1] = Graph(4);
    CHECK_THROWS(pop.validate());
}

}
