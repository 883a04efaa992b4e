#pragma once

#include <filesystem>
#include <iosfwd>

#include "popergm/config.hpp"

namespace popergm {

namespace fs = std::filesystem;

/// Relative data paths in a config resolve against `base` (the directory of
/// the config file). Every command writes into `out`, creating it.
struct CommandPaths {
    fs::path base = ".";
    fs::path out = "out";
};

/// Draws theta_i ~ N(mu_g, Sigma_g) per configured group, simulates one
/// network per theta and writes the population plus truth.csv.
void cmd_simulate(const RunConfig& config, const CommandPaths& paths, std::ostream& log);

/// Runs the multilevel sampler and writes trace.csv, theta.csv,
/// acceptance.csv and manifest.json.
void cmd_fit(const RunConfig& config, const CommandPaths& paths, std::ostream& log);

/// Posterior predictive envelopes per group: gof_group<j>.csv.
void cmd_gof(const RunConfig& config, const CommandPaths& paths, const fs::path& trace, std::ostream& log);

/// summary.csv with one row per trace column.
void cmd_summary(const fs::path& trace, const CommandPaths& paths, std::ostream& log);

/// Thresholds correlation matrices into a population at a target mean degree.
void cmd_ingest(const RunConfig& config, const CommandPaths& paths, std::ostream& log);

}  // namespace popergm
