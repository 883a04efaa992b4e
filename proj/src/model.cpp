#include "popergm/model.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace popergm {

namespace {

std::atomic<std::uint64_t> g_partition_evaluations{0};

std::string format_decay(double decay) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, decay);
    return std::string(buf, res.ptr);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

StatisticTerm parse_term(std::string_view d) {
    auto colon = d.find(':');
    std::string_view head = d.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : d.substr(colon + 1);
    if (head == "edges" && colon == std::string_view::npos) return EdgesTerm{};
    if (head == "homotopy" && colon == std::string_view::npos) return HomotopyTerm{};
    if (head == "nodematch" && !arg.empty()) {
        if (arg == "homotopy") return HomotopyTerm{};
        return NodeMatchTerm{std::string(arg)};
    }
    if (head == "gwesp" && !arg.empty()) {
        double decay = 0;
        auto res = std::from_chars(arg.data(), arg.data() + arg.size(), decay);
        if (res.ec != std::errc{} || res.ptr != arg.data() + arg.size())
            throw std::invalid_argument("bad GWESP decay in term '" + std::string(d) + "'");
        if (!std::isfinite(decay) || decay < 0)
            throw std::invalid_argument("GWESP decay must be finite and >= 0");
        return GwespTerm{decay};
    }
    throw std::invalid_argument("unknown model term '" + std::string(d) + "'");
}

std::string term_descriptor(const StatisticTerm& term) {
    return std::visit(overloaded{
                          [](const EdgesTerm&) { return std::string("edges"); },
                          [](const NodeMatchTerm& t) { return "nodematch:" + t.attribute; },
                          [](const HomotopyTerm&) { return std::string("homotopy"); },
                          [](const GwespTerm& t) { return "gwesp:" + format_decay(t.decay); },
                      },
                      term);
}

std::string term_name(const StatisticTerm& term) {
    return std::visit(overloaded{
                          [](const EdgesTerm&) { return std::string("edges"); },
                          [](const NodeMatchTerm& t) { return "nodematch." + t.attribute; },
                          [](const HomotopyTerm&) { return std::string("nodematch.homotopy"); },
                          [](const GwespTerm& t) { return "gwesp.fixed." + format_decay(t.decay); },
                      },
                      term);
}

std::vector<std::string> ModelSpec::names() const {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(term_name(t));
    return out;
}

std::vector<std::string> ModelSpec::descriptors() const {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(term_descriptor(t));
    return out;
}

ModelSpec ModelSpec::parse(const std::vector<std::string>& descriptors) {
    ModelSpec spec;
    for (const auto& d : descriptors) spec.terms.push_back(parse_term(d));
    if (spec.terms.empty()) throw std::invalid_argument("model needs at least one term");
    return spec;
}

std::vector<double> gwesp_weights(double decay, int n_nodes) {
    // Shared partners never exceed N-2; one spare slot keeps increments in range.
    int size = std::max(n_nodes, 1);
    std::vector<double> w(size);
    double r = 1.0 - std::exp(-decay);
    double scale = std::exp(decay);
    for (int k = 0; k < size; ++k) w[k] = scale * (1.0 - std::pow(r, k));
    return w;
}

Model::Model(ModelSpec spec, const NodeCovariates& covariates)
    : spec_(std::move(spec)), n_nodes_(covariates.n_nodes()), dyads_(all_dyads(covariates.n_nodes())) {
    if (spec_.terms.empty()) throw std::invalid_argument("model needs at least one term");
    for (const auto& term : spec_.terms) {
        Compiled c{};
        std::visit(overloaded{
                       [&](const EdgesTerm&) { c.kind = Kind::edges; },
                       [&](const NodeMatchTerm& t) {
                           c.kind = Kind::nodematch;
                           c.codes = covariates.attribute_codes(t.attribute);
                       },
                       [&](const HomotopyTerm&) {
                           c.kind = Kind::homotopy;
                           c.codes = covariates.homotopy_partner();
                       },
                       [&](const GwespTerm& t) {
                           c.kind = Kind::gwesp;
                           c.weight = gwesp_weights(t.decay, n_nodes_);
                           c.increment.resize(c.weight.size());
                           for (std::size_t k = 0; k + 1 < c.weight.size(); ++k)
                               c.increment[k] = c.weight[k + 1] - c.weight[k];
                       },
                   },
                   term);
        compiled_.push_back(std::move(c));
    }
}

StatVector Model::summary(const Graph& g) const {
    if (g.n_nodes() != n_nodes_) throw std::invalid_argument("graph size does not match model");
    StatVector s = StatVector::Zero(dimension());
    bool need_esp = std::any_of(compiled_.begin(), compiled_.end(),
                                [](const Compiled& c) { return c.kind == Kind::gwesp; });
    std::vector<std::int64_t> esp;
    if (need_esp) esp = edgewise_shared_partners(g);
    for (std::size_t k = 0; k < compiled_.size(); ++k) {
        const Compiled& c = compiled_[k];
        switch (c.kind) {
            case Kind::edges:
                s[k] = double(g.edge_count());
                break;
            case Kind::nodematch: {
                std::int64_t count = 0;
                for (int i = 0; i < n_nodes_; ++i)
                    g.for_each_neighbor(i, [&](int j) {
                        if (j > i && c.codes[i] == c.codes[j]) ++count;
                    });
                s[k] = double(count);
                break;
            }
            case Kind::homotopy: {
                std::int64_t count = 0;
                for (int i = 0; i < n_nodes_; ++i)
                    if (c.codes[i] > i && g.has_edge(i, c.codes[i])) ++count;
                s[k] = double(count);
                break;
            }
            case Kind::gwesp: {
                double total = 0.0;
                for (std::size_t w = 1; w < esp.size(); ++w) total += c.weight[w] * double(esp[w]);
                s[k] = total;
                break;
            }
        }
    }
    return s;
}

double Model::gwesp_change(const Compiled& term, const Graph& g, int i, int j) const {
    // Shared-partner counts below are those of the graph with {i,j} switched off.
    const int on = g.has_edge(i, j) ? 1 : 0;
    double delta = term.weight[g.common_neighbors(i, j)];
    g.for_each_common_neighbor(i, j, [&](int k) {
        delta += term.increment[g.common_neighbors(i, k) - on];
        delta += term.increment[g.common_neighbors(j, k) - on];
    });
    return delta;
}

void Model::change(const Graph& g, int i, int j, Eigen::Ref<Vector> out) const {
    for (std::size_t k = 0; k < compiled_.size(); ++k) {
        const Compiled& c = compiled_[k];
        switch (c.kind) {
            case Kind::edges:
                out[k] = 1.0;
                break;
            case Kind::nodematch:
                out[k] = c.codes[i] == c.codes[j] ? 1.0 : 0.0;
                break;
            case Kind::homotopy:
                out[k] = c.codes[i] == j ? 1.0 : 0.0;
                break;
            case Kind::gwesp:
                out[k] = gwesp_change(c, g, i, j);
                break;
        }
    }
}

StatVector Model::change(const Graph& g, int i, int j) const {
    if (i < 0 || j < 0 || i >= n_nodes_ || j >= n_nodes_)
        throw std::out_of_range("dyad index out of range");
    if (i == j) throw std::invalid_argument("self-loop dyad");
    StatVector out(dimension());
    change(g, i, j, out);
    return out;
}

StatVector summary_statistics(const Graph& g, const NodeCovariates& cov, const ModelSpec& spec) {
    return Model(spec, cov).summary(g);
}

StatVector change_statistics(const Graph& g, const NodeCovariates& cov, const ModelSpec& spec, Dyad dyad) {
    return Model(spec, cov).change(g, dyad.first, dyad.second);
}

double log_unnormalized(const Vector& theta, const StatVector& s) {
    if (theta.size() != s.size())
        throw std::invalid_argument("parameter and statistic dimensions differ: " +
                                    std::to_string(theta.size()) + " vs " + std::to_string(s.size()));
    return theta.dot(s);
}

std::vector<std::int64_t> edgewise_shared_partners(const Graph& g) {
    std::vector<std::int64_t> hist(std::size_t(std::max(g.n_nodes() - 1, 1)), 0);
    for (int i = 0; i < g.n_nodes(); ++i)
        g.for_each_neighbor(i, [&](int j) {
            if (j > i) ++hist[g.common_neighbors(i, j)];
        });
    return hist;
}

Graph graph_from_dyad_mask(int n_nodes, std::uint64_t mask) {
    Graph g(n_nodes);
    int d = 0;
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 1; j < n_nodes; ++j, ++d)
            if ((mask >> d) & 1u) g.toggle(i, j);
    return g;
}

std::uint64_t dyad_mask(const Graph& g) {
    if (g.dyad_count() > 64) throw std::invalid_argument("graph too large for a dyad mask");
    std::uint64_t mask = 0;
    int d = 0;
    for (int i = 0; i < g.n_nodes(); ++i)
        for (int j = i + 1; j < g.n_nodes(); ++j, ++d)
            if (g.has_edge(i, j)) mask |= std::uint64_t{1} << d;
    return mask;
}

StatisticCensus::StatisticCensus(const ModelSpec& spec, const NodeCovariates& cov)
    : dimension_(spec.dimension()) {
    int n = cov.n_nodes();
    if (n > kMaxEnumerationNodes)
        throw std::invalid_argument("exact enumeration supports at most " +
                                    std::to_string(kMaxEnumerationNodes) + " nodes, got " +
                                    std::to_string(n));
    Model model(spec, cov);
    const int dyads = n * (n - 1) / 2;
    std::map<std::vector<double>, double> table;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dyads); ++mask) {
        StatVector s = model.summary(graph_from_dyad_mask(n, mask));
        table[std::vector<double>(s.data(), s.data() + s.size())] += 1.0;
    }
    for (const auto& [key, count] : table) {
        stats_.push_back(Eigen::Map<const StatVector>(key.data(), Eigen::Index(key.size())));
        counts_.push_back(count);
    }
}

double StatisticCensus::log_partition(const Vector& theta) const {
    if (theta.size() != dimension_) throw std::invalid_argument("parameter dimension mismatch");
    ++g_partition_evaluations;
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(stats_.size());
    for (std::size_t k = 0; k < stats_.size(); ++k) {
        terms[k] = std::log(counts_[k]) + theta.dot(stats_[k]);
        peak = std::max(peak, terms[k]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return peak + std::log(acc);
}

double StatisticCensus::total_graphs() const {
    double total = 0;
    for (double c : counts_) total += c;
    return total;
}

double exact_log_partition(const ModelSpec& spec, const NodeCovariates& cov, const Vector& theta) {
    return StatisticCensus(spec, cov).log_partition(theta);
}

std::uint64_t partition_evaluations() { return g_partition_evaluations.load(); }

}  // namespace popergm
