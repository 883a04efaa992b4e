#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "popergm/graph.hpp"

namespace popergm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using StatVector = Eigen::VectorXd;

struct EdgesTerm {
    bool operator==(const EdgesTerm&) const = default;
};
struct NodeMatchTerm {
    std::string attribute;
    bool operator==(const NodeMatchTerm&) const = default;
};
struct HomotopyTerm {
    bool operator==(const HomotopyTerm&) const = default;
};
/// Geometrically weighted edgewise shared partners with a fixed decay.
struct GwespTerm {
    double decay = 0.0;
    bool operator==(const GwespTerm&) const = default;
};

using StatisticTerm = std::variant<EdgesTerm, NodeMatchTerm, HomotopyTerm, GwespTerm>;

/// Parses "edges", "nodematch:<attr>", "homotopy" or "gwesp:<decay>".
StatisticTerm parse_term(std::string_view descriptor);
/// Inverse of parse_term.
std::string term_descriptor(const StatisticTerm& term);
/// Output label: "edges", "nodematch.<attr>", "nodematch.homotopy", "gwesp.fixed.<decay>".
std::string term_name(const StatisticTerm& term);

/// Ordered term list; the order fixes the coordinates of theta and s(y).
struct ModelSpec {
    std::vector<StatisticTerm> terms;

    int dimension() const { return int(terms.size()); }
    std::vector<std::string> names() const;
    std::vector<std::string> descriptors() const;
    static ModelSpec parse(const std::vector<std::string>& descriptors);

    bool operator==(const ModelSpec&) const = default;
};

/// Per-edge GWESP weight e^tau (1 - (1 - e^-tau)^w) for w = 0..N-1 (the last slot is a spare).
std::vector<double> gwesp_weights(double decay, int n_nodes);

/// A ModelSpec bound to a node set and its covariates, ready for the
/// sampler's inner loop. Construction validates that every term's inputs
/// (attributes, homotopy mapping) are available.
class Model {
public:
    Model(ModelSpec spec, const NodeCovariates& covariates);

    const ModelSpec& spec() const { return spec_; }
    int dimension() const { return spec_.dimension(); }
    int n_nodes() const { return n_nodes_; }
    const std::vector<Dyad>& dyads() const { return dyads_; }

    StatVector summary(const Graph& g) const;

    /// s(g with {i,j} on) - s(g with {i,j} off); independent of the dyad's state.
    void change(const Graph& g, int i, int j, Eigen::Ref<Vector> out) const;
    StatVector change(const Graph& g, int i, int j) const;

private:
    enum class Kind { edges, nodematch, homotopy, gwesp };
    struct Compiled {
        Kind kind;
        std::vector<int> codes;          // attribute codes or homotopy partners
        std::vector<double> weight;      // GWESP weight by shared-partner count
        std::vector<double> increment;   // weight[w+1] - weight[w]
    };

    double gwesp_change(const Compiled& term, const Graph& g, int i, int j) const;

    ModelSpec spec_;
    int n_nodes_;
    std::vector<Compiled> compiled_;
    std::vector<Dyad> dyads_;
};

StatVector summary_statistics(const Graph& g, const NodeCovariates& cov, const ModelSpec& spec);
StatVector change_statistics(const Graph& g, const NodeCovariates& cov, const ModelSpec& spec, Dyad dyad);

/// theta^T s.
double log_unnormalized(const Vector& theta, const StatVector& s);

/// Histogram of shared-partner counts over edges: EP_w for w = 0..N-2.
std::vector<std::int64_t> edgewise_shared_partners(const Graph& g);

/// Largest node count accepted by the enumeration routines.
inline constexpr int kMaxEnumerationNodes = 7;

/// Graph with dyads set from the bits of `mask` in all_dyads order.
Graph graph_from_dyad_mask(int n_nodes, std::uint64_t mask);
std::uint64_t dyad_mask(const Graph& g);

/// Exact tabulation of the sufficient statistics over every graph on N nodes.
/// Distinct statistic vectors are stored once with their multiplicity, so the
/// log partition function is cheap to evaluate for any theta afterwards.
class StatisticCensus {
public:
    StatisticCensus(const ModelSpec& spec, const NodeCovariates& cov);

    double log_partition(const Vector& theta) const;
    int dimension() const { return dimension_; }
    std::size_t distinct() const { return counts_.size(); }
    double total_graphs() const;

private:
    int dimension_;
    std::vector<StatVector> stats_;
    std::vector<double> counts_;
};

/// log Z(theta) by enumeration over all 2^{N(N-1)/2} graphs (N <= 7).
double exact_log_partition(const ModelSpec& spec, const NodeCovariates& cov, const Vector& theta);

/// Number of partition-function evaluations since start-up; lets tests assert
/// that a code path never touches Z(theta).
std::uint64_t partition_evaluations();

}  // namespace popergm
