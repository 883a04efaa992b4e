#pragma once

#include <string>
#include <vector>

#include "popergm/graph.hpp"
#include "popergm/model.hpp"

namespace popergm {

/// Per-subject N x N correlation matrices with group labels (1-based).
struct CorrelationSet {
    std::vector<Matrix> matrices;
    std::vector<std::string> subjects;
    std::vector<int> group;

    int n_nodes() const { return matrices.empty() ? 0 : int(matrices.front().rows()); }
    /// Throws DataError for non-square, asymmetric or out-of-range matrices.
    void validate() const;
};

struct ThresholdOptions {
    /// Compare |C_kl| rather than the signed correlation.
    bool absolute = false;
};

/// Edge {k,l} in network i iff C_kl >= r.
GraphPopulation threshold_networks(const CorrelationSet& cs, double r, const ThresholdOptions& options = {});
/// Same with one threshold per network.
GraphPopulation threshold_networks(const CorrelationSet& cs, const std::vector<double>& r,
                                   const ThresholdOptions& options = {});

/// Largest r whose pooled mean degree 2 E / (n N) reaches `target_mean_degree`.
/// Ties at the cut are all kept, so the achieved mean degree may exceed the
/// target by the tied edges.
double solve_threshold_for_degree(const CorrelationSet& cs, double target_mean_degree,
                                  const ThresholdOptions& options = {});
/// One threshold per network, each reaching the target on its own.
std::vector<double> solve_thresholds_per_network(const CorrelationSet& cs, double target_mean_degree,
                                                 const ThresholdOptions& options = {});

/// Pooled mean node degree of a population.
double mean_degree(const GraphPopulation& pop);

}  // namespace popergm
