#include "popergm/summary.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "popergm/gof.hpp"

namespace popergm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size()); }

double autocovariance(std::span<const double> x, double mean, std::size_t lag) {
    double acc = 0.0;
    for (std::size_t t = 0; t + lag < x.size(); ++t) acc += (x[t] - mean) * (x[t + lag] - mean);
    return acc / double(x.size());
}

}  // namespace

std::vector<double> autocorrelation(std::span<const double> x, std::span<const int> lags) {
    std::vector<double> out;
    if (x.empty()) return std::vector<double>(lags.size(), kNaN);
    const double m = mean_of(x);
    const double c0 = autocovariance(x, m, 0);
    for (int lag : lags) {
        if (c0 <= 0.0 || lag < 0 || std::size_t(lag) >= x.size())
            out.push_back(kNaN);
        else
            out.push_back(autocovariance(x, m, std::size_t(lag)) / c0);
    }
    return out;
}

double effective_sample_size(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return kNaN;
    const double m = mean_of(x);
    const double c0 = autocovariance(x, m, 0);
    if (!(c0 > 0.0)) return kNaN;
    double tau = -1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
        double pair = (autocovariance(x, m, 2 * k) + autocovariance(x, m, 2 * k + 1)) / c0;
        if (pair <= 0.0) break;
        pair = std::min(pair, previous);
        tau += 2.0 * pair;
        previous = pair;
    }
    return double(n) / std::max(tau, 1.0 / double(n));
}

ParameterSummary summarize(const std::string& name, std::span<const double> x, const std::vector<int>& lags) {
    if (x.empty()) throw std::invalid_argument("cannot summarise an empty column");
    ParameterSummary s;
    s.name = name;
    s.mean = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.sd = x.size() > 1 ? std::sqrt(ss / double(x.size() - 1)) : 0.0;
    std::vector<double> v(x.begin(), x.end());
    s.q025 = quantile(v, 0.025);
    s.q50 = quantile(v, 0.5);
    s.q975 = quantile(v, 0.975);
    s.degenerate = !(ss > 0.0);
    s.ess = s.degenerate ? kNaN : effective_sample_size(x);
    s.lags = lags;
    s.acf = autocorrelation(x, lags);
    return s;
}

}  // namespace popergm
