#pragma once

#include <span>
#include <string>
#include <vector>

namespace popergm {

/// Sample autocorrelations at the given lags (normalised by the lag-0
/// autocovariance; NaN for a constant series).
std::vector<double> autocorrelation(std::span<const double> x, std::span<const int> lags);

/// Geyer initial monotone sequence estimate; NaN for a constant series.
double effective_sample_size(std::span<const double> x);

struct ParameterSummary {
    std::string name;
    double mean = 0, sd = 0;
    double q025 = 0, q50 = 0, q975 = 0;
    double ess = 0;
    bool degenerate = false;
    std::vector<int> lags;
    std::vector<double> acf;
};

inline const std::vector<int> kDefaultLags{1, 5, 10, 20, 50};

ParameterSummary summarize(const std::string& name, std::span<const double> x,
                           const std::vector<int>& lags = kDefaultLags);

}  // namespace popergm
