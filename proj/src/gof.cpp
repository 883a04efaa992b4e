#include "popergm/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "popergm/parallel.hpp"

namespace popergm {

std::string metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::degree: return "degree";
        case MetricKind::geodesic: return "geodesic";
        case MetricKind::esp: return "esp";
    }
    return "unknown";
}

std::int64_t MetricDistribution::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}) + unreachable;
}

MetricDistribution degree_distribution(const Graph& g) {
    MetricDistribution d{MetricKind::degree, std::vector<std::int64_t>(std::size_t(g.n_nodes()), 0), 0};
    for (int i = 0; i < g.n_nodes(); ++i) ++d.counts[std::size_t(g.degree(i))];
    return d;
}

MetricDistribution geodesic_distribution(const Graph& g) {
    const int n = g.n_nodes();
    MetricDistribution d{MetricKind::geodesic, std::vector<std::int64_t>(std::size_t(std::max(n, 1)), 0), 0};
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int source = 0; source < n; ++source) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[source] = 0;
        std::size_t head = 0, tail = 0;
        queue[tail++] = source;
        while (head < tail) {
            int u = queue[head++];
            g.for_each_neighbor(u, [&](int v) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue[tail++] = v;
                }
            });
        }
        for (int t = source + 1; t < n; ++t) {
            if (dist[t] < 0)
                ++d.unreachable;
            else
                ++d.counts[std::size_t(dist[t])];
        }
    }
    return d;
}

MetricDistribution esp_distribution(const Graph& g) {
    return MetricDistribution{MetricKind::esp, edgewise_shared_partners(g), 0};
}

MetricDistribution metric_distribution(const Graph& g, MetricKind kind) {
    switch (kind) {
        case MetricKind::degree: return degree_distribution(g);
        case MetricKind::geodesic: return geodesic_distribution(g);
        case MetricKind::esp: return esp_distribution(g);
    }
    throw std::invalid_argument("unknown metric");
}

std::vector<Graph> posterior_predictive(const PosteriorTrace& trace, int group, int draws, const Model& model,
                                        const SamplerConfig& sampler, std::uint64_t seed, int workers) {
    if (trace.size() == 0) throw std::invalid_argument("posterior trace is empty");
    if (draws < 1) throw std::invalid_argument("need at least one predictive draw");
    if (group < 1 || group > trace.n_groups) throw std::invalid_argument("group out of range");
    if (sampler.init == SamplerConfig::Init::observed)
        throw std::invalid_argument("predictive draws cannot start from an observed network");
    std::vector<Graph> out(static_cast<std::size_t>(draws), Graph(model.n_nodes()));
    parallel_for(out.size(), workers, [&](std::size_t s) {
        Rng rng = make_stream(seed, 0, StreamKind::predictive, s);
        std::uniform_int_distribution<std::size_t> pick(0, trace.size() - 1);
        const Vector& mu = trace.mu_group[pick(rng)][std::size_t(group - 1)];
        out[s] = simulate_ergm(model, mu, sampler, rng).graph;
    });
    return out;
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double h = (double(values.size()) - 1.0) * prob;
    const auto lo = std::size_t(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - double(lo)) * (values[hi] - values[lo]);
}

PredictiveEnvelope build_envelope(const std::vector<Graph>& sims, const std::vector<Graph>& observed, MetricKind kind,
                                  double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("envelope level must lie in (0, 1)");
    if (sims.empty() || observed.empty()) throw std::invalid_argument("envelope needs simulated and observed networks");
    std::vector<MetricDistribution> sim_d, obs_d;
    for (const auto& g : sims) sim_d.push_back(metric_distribution(g, kind));
    for (const auto& g : observed) obs_d.push_back(metric_distribution(g, kind));

    std::size_t bins = 0;
    auto widen = [&](const MetricDistribution& d) {
        for (std::size_t b = d.counts.size(); b-- > 0;)
            if (d.counts[b] != 0) {
                bins = std::max(bins, b + 1);
                break;
            }
    };
    for (const auto& d : sim_d) widen(d);
    for (const auto& d : obs_d) widen(d);

    PredictiveEnvelope env{kind, level, {}};
    auto add_row = [&](const std::string& label, auto&& value_of) {
        std::vector<double> s, o;
        for (const auto& d : sim_d) s.push_back(double(value_of(d)));
        for (const auto& d : obs_d) o.push_back(double(value_of(d)));
        EnvelopeRow row;
        row.bin = label;
        row.obs_median = quantile(o, 0.5);
        row.obs_q1 = quantile(o, 0.25);
        row.obs_q3 = quantile(o, 0.75);
        row.obs_min = quantile(o, 0.0);
        row.obs_max = quantile(o, 1.0);
        row.sim_lower = quantile(s, (1.0 - level) / 2.0);
        row.sim_upper = quantile(s, (1.0 + level) / 2.0);
        env.rows.push_back(row);
    };
    const std::size_t first = kind == MetricKind::geodesic ? 1 : 0;
    for (std::size_t b = first; b < bins; ++b)
        add_row(std::to_string(b), [b](const MetricDistribution& d) { return d.at(b); });
    if (kind == MetricKind::geodesic)
        add_row("inf", [](const MetricDistribution& d) { return d.unreachable; });
    return env;
}

}  // namespace popergm
