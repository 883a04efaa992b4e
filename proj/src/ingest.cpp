#include "popergm/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "popergm/error.hpp"

namespace popergm {

namespace {

double value_of(double c, const ThresholdOptions& options) { return options.absolute ? std::abs(c) : c; }

std::vector<double> upper_values(const CorrelationSet& cs, std::size_t first, std::size_t last,
                                 const ThresholdOptions& options) {
    std::vector<double> values;
    for (std::size_t s = first; s < last; ++s) {
        const Matrix& m = cs.matrices[s];
        for (Eigen::Index k = 0; k < m.rows(); ++k)
            for (Eigen::Index l = k + 1; l < m.cols(); ++l) values.push_back(value_of(m(k, l), options));
    }
    return values;
}

double cut_for(std::vector<double> values, double target, int n_networks, int n_nodes) {
    if (!(target >= 0.0 && target <= n_nodes - 1))
        throw std::invalid_argument("target mean degree must lie in [0, N-1]");
    if (values.empty()) throw std::invalid_argument("no correlations to threshold");
    std::sort(values.begin(), values.end(), std::greater<>());
    // Smallest edge total E with 2E / (nN) >= target.
    const double needed = target * double(n_networks) * double(n_nodes) / 2.0;
    auto edges = std::size_t(std::ceil(needed - 1e-9));
    if (edges == 0) return std::nextafter(values.front(), std::numeric_limits<double>::infinity());
    edges = std::min(edges, values.size());
    return values[edges - 1];
}

}  // namespace

void CorrelationSet::validate() const {
    if (matrices.size() != subjects.size() || matrices.size() != group.size())
        throw DataError("correlation set has mismatched subject, group and matrix counts");
    const int n = n_nodes();
    for (std::size_t s = 0; s < matrices.size(); ++s) {
        const Matrix& m = matrices[s];
        const std::string who = subjects[s].empty() ? std::to_string(s + 1) : subjects[s];
        if (m.rows() != m.cols()) throw DataError("correlation matrix for " + who + " is not square");
        if (m.rows() != n) throw DataError("correlation matrix for " + who + " has a different node count");
        if (!m.allFinite()) throw DataError("correlation matrix for " + who + " has non-finite entries");
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(m(k, k) - 1.0) > 1e-6) throw DataError("correlation matrix for " + who + " lacks a unit diagonal");
            for (Eigen::Index l = k + 1; l < n; ++l) {
                if (std::abs(m(k, l) - m(l, k)) > 1e-9) throw DataError("correlation matrix for " + who + " is asymmetric");
                if (m(k, l) < -1.0 - 1e-12 || m(k, l) > 1.0 + 1e-12)
                    throw DataError("correlation matrix for " + who + " has entries outside [-1, 1]");
            }
        }
    }
}

GraphPopulation threshold_networks(const CorrelationSet& cs, const std::vector<double>& r,
                                   const ThresholdOptions& options) {
    cs.validate();
    if (r.size() != cs.matrices.size()) throw std::invalid_argument("one threshold per network required");
    GraphPopulation pop;
    const int n = cs.n_nodes();
    pop.covariates = NodeCovariates(n);
    pop.group = cs.group;
    pop.subjects = cs.subjects;
    for (std::size_t s = 0; s < cs.matrices.size(); ++s) {
        if (!std::isfinite(r[s])) throw std::invalid_argument("threshold must be finite");
        Graph g(n);
        const Matrix& m = cs.matrices[s];
        for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l)
                if (value_of(m(k, l), options) >= r[s]) g.toggle(k, l);
        pop.graphs.push_back(std::move(g));
    }
    return pop;
}

GraphPopulation threshold_networks(const CorrelationSet& cs, double r, const ThresholdOptions& options) {
    return threshold_networks(cs, std::vector<double>(cs.matrices.size(), r), options);
}

double solve_threshold_for_degree(const CorrelationSet& cs, double target_mean_degree, const ThresholdOptions& options) {
    cs.validate();
    return cut_for(upper_values(cs, 0, cs.matrices.size(), options), target_mean_degree, int(cs.matrices.size()),
                   cs.n_nodes());
}

std::vector<double> solve_thresholds_per_network(const CorrelationSet& cs, double target_mean_degree,
                                                 const ThresholdOptions& options) {
    cs.validate();
    std::vector<double> out;
    for (std::size_t s = 0; s < cs.matrices.size(); ++s)
        out.push_back(cut_for(upper_values(cs, s, s + 1, options), target_mean_degree, 1, cs.n_nodes()));
    return out;
}

double mean_degree(const GraphPopulation& pop) {
    if (pop.graphs.empty()) return 0.0;
    double edges = 0;
    for (const auto& g : pop.graphs) edges += double(g.edge_count());
    return 2.0 * edges / (double(pop.graphs.size()) * double(pop.graphs.front().n_nodes()));
}

}  // namespace popergm
