#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "popergm/engine.hpp"
#include "popergm/graph.hpp"
#include "popergm/model.hpp"
#include "popergm/sampler.hpp"

namespace popergm {

enum class MetricKind { degree, geodesic, esp };

std::string metric_name(MetricKind kind);

/// Histogram of a network metric. `counts[b]` is the number of items in bin
/// b (degree b, path length b, or b shared partners). Geodesic distributions
/// keep unreachable pairs in `unreachable` and leave counts[0] at zero.
struct MetricDistribution {
    MetricKind kind = MetricKind::degree;
    std::vector<std::int64_t> counts;
    std::int64_t unreachable = 0;

    std::int64_t total() const;
    /// Count for a bin label ("inf" for the unreachable geodesic bin).
    std::int64_t at(std::size_t bin) const { return bin < counts.size() ? counts[bin] : 0; }
};

MetricDistribution degree_distribution(const Graph& g);
/// Shortest paths over unordered pairs by breadth-first search from every node.
MetricDistribution geodesic_distribution(const Graph& g);
MetricDistribution esp_distribution(const Graph& g);
MetricDistribution metric_distribution(const Graph& g, MetricKind kind);

/// S networks, each simulated at a uniformly chosen retained draw of
/// mu^(group) (group is 1-based). Draw s uses stream (seed, s).
std::vector<Graph> posterior_predictive(const PosteriorTrace& trace, int group, int draws, const Model& model,
                                        const SamplerConfig& sampler, std::uint64_t seed, int workers = 1);

struct EnvelopeRow {
    std::string bin;
    double obs_median = 0, obs_q1 = 0, obs_q3 = 0;
    double obs_min = 0, obs_max = 0;
    double sim_lower = 0, sim_upper = 0;
};

struct PredictiveEnvelope {
    MetricKind kind = MetricKind::degree;
    double level = 0.9;
    std::vector<EnvelopeRow> rows;
};

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double prob);

/// Per-bin simulated quantiles at (1 - level)/2 and (1 + level)/2 next to
/// the observed networks' five-number summaries. Degree and ESP bins run
/// up to the largest non-empty bin; geodesic bins end with "inf".
PredictiveEnvelope build_envelope(const std::vector<Graph>& sims, const std::vector<Graph>& observed, MetricKind kind,
                                  double level);

}  // namespace popergm
