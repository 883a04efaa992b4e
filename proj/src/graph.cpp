#include "popergm/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace popergm {

namespace {

void check_dyad(int n, int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw std::out_of_range("node index out of range: {" + std::to_string(i) + "," +
                                std::to_string(j) + "} for N=" + std::to_string(n));
    if (i == j) throw std::invalid_argument("self-loop dyad {" + std::to_string(i) + "," +
                                            std::to_string(j) + "}");
}

}  // namespace

Graph::Graph(int n_nodes)
    : n_(n_nodes), words_((n_nodes + 63) / 64), bits_(std::size_t(n_nodes) * ((n_nodes + 63) / 64), 0) {
    if (n_nodes <= 0) throw std::invalid_argument("graph needs at least one node");
}

int Graph::degree(int i) const {
    int d = 0;
    for (std::uint64_t w : row(i)) d += std::popcount(w);
    return d;
}

std::vector<Dyad> Graph::edges() const {
    std::vector<Dyad> out;
    out.reserve(static_cast<std::size_t>(edges_));
    for (int i = 0; i < n_; ++i)
        for_each_neighbor(i, [&](int j) {
            if (j > i) out.emplace_back(i, j);
        });
    return out;
}

Graph toggle_edge(Graph g, int i, int j) {
    check_dyad(g.n_nodes(), i, j);
    g.toggle(i, j);
    return g;
}

Graph from_edge_list(int n_nodes, std::span<const Dyad> edges) {
    Graph g(n_nodes);
    for (auto [i, j] : edges) {
        check_dyad(n_nodes, i, j);
        g.set_edge(i, j, true);
    }
    return g;
}

double density(const Graph& g) {
    if (g.n_nodes() < 2) throw std::invalid_argument("density needs at least two nodes");
    return double(g.edge_count()) / double(g.dyad_count());
}

std::vector<Dyad> all_dyads(int n_nodes) {
    std::vector<Dyad> out;
    out.reserve(std::size_t(n_nodes) * (n_nodes - 1) / 2);
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j) out.emplace_back(i, j);
    return out;
}

void NodeCovariates::set_attribute(const std::string& name, const std::vector<std::string>& values) {
    if (int(values.size()) != n_)
        throw std::invalid_argument("attribute '" + name + "' has " + std::to_string(values.size()) +
                                    " values, expected " + std::to_string(n_));
    std::vector<std::string> levels;
    std::vector<int> codes(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        auto it = std::find(levels.begin(), levels.end(), values[k]);
        if (it == levels.end()) {
            levels.push_back(values[k]);
            it = levels.end() - 1;
        }
        codes[k] = int(it - levels.begin());
    }
    codes_[name] = std::move(codes);
    levels_[name] = std::move(levels);
}

const std::vector<int>& NodeCovariates::attribute_codes(const std::string& name) const {
    auto it = codes_.find(name);
    if (it == codes_.end()) throw std::invalid_argument("missing node attribute '" + name + "'");
    return it->second;
}

const std::vector<std::string>& NodeCovariates::attribute_levels(const std::string& name) const {
    auto it = levels_.find(name);
    if (it == levels_.end()) throw std::invalid_argument("missing node attribute '" + name + "'");
    return it->second;
}

std::vector<std::string> NodeCovariates::attribute_values(const std::string& name) const {
    const auto& codes = attribute_codes(name);
    const auto& levels = attribute_levels(name);
    std::vector<std::string> out;
    out.reserve(codes.size());
    for (int c : codes) out.push_back(levels[c]);
    return out;
}

std::vector<std::string> NodeCovariates::attribute_names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : codes_) out.push_back(name);
    return out;
}

void NodeCovariates::set_homotopy_partner(std::vector<int> partner) {
    if (int(partner.size()) != n_)
        throw std::invalid_argument("homotopy mapping has wrong length");
    for (int i = 0; i < n_; ++i) {
        int q = partner[i];
        if (q < 0 || q >= n_) throw std::invalid_argument("homotopy partner out of range");
        if (q == i) throw std::invalid_argument("homotopy partner maps node to itself");
        if (partner[q] != i) throw std::invalid_argument("homotopy mapping is not an involution");
    }
    partner_ = std::move(partner);
}

std::vector<int> NodeCovariates::homotopy_partner() const {
    if (partner_) return *partner_;
    if (n_ % 2 != 0)
        throw std::invalid_argument("no homotopy mapping supplied and N is odd");
    std::vector<int> partner(n_);
    int half = n_ / 2;
    for (int i = 0; i < n_; ++i) partner[i] = i < half ? i + half : i - half;
    return partner;
}

NodeCovariates hemisphere_covariates(int n_nodes) {
    NodeCovariates cov(n_nodes);
    std::vector<std::string> side(n_nodes);
    for (int i = 0; i < n_nodes; ++i) side[i] = i < n_nodes / 2 ? "left" : "right";
    cov.set_attribute("hemisphere", side);
    return cov;
}

int GraphPopulation::n_groups() const {
    return group.empty() ? 0 : *std::max_element(group.begin(), group.end());
}

void GraphPopulation::validate() const {
    if (group.size() != graphs.size())
        throw std::invalid_argument("population has " + std::to_string(graphs.size()) + " graphs but " +
                                    std::to_string(group.size()) + " group labels");
    for (const auto& g : graphs)
        if (g.n_nodes() != covariates.n_nodes())
            throw std::invalid_argument("graph node count differs from covariate node count");
    int J = n_groups();
    std::vector<int> sizes(std::size_t(std::max(J, 0)) + 1, 0);
    for (int label : group) {
        if (label < 1) throw std::invalid_argument("group labels must be >= 1");
        ++sizes[label];
    }
    for (int j = 1; j <= J; ++j)
        if (sizes[j] == 0) throw std::invalid_argument("group " + std::to_string(j) + " is empty");
}

std::vector<std::vector<int>> GraphPopulation::members_by_group() const {
    std::vector<std::vector<int>> out(n_groups());
    for (std::size_t i = 0; i < group.size(); ++i) out[group[i] - 1].push_back(int(i));
    return out;
}

}  // namespace popergm
