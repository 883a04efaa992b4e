#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "popergm/engine.hpp"
#include "popergm/gof.hpp"
#include "popergm/graph.hpp"
#include "popergm/ingest.hpp"

namespace popergm {

namespace fs = std::filesystem;

/// Delimiter-separated text table with a header row. Reading accepts
/// commas, tabs or runs of whitespace; '#' lines are skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> find(const std::string& column) const;
    std::size_t column(const std::string& column) const;
};

Table read_table(const fs::path& path);
void write_table(const fs::path& path, const Table& table);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& context);
long long parse_integer(const std::string& text, const std::string& context);

/// "i j" per line, 1-based, '#' comments.
Graph read_edge_list(const fs::path& path, int n_nodes);
void write_edge_list(const fs::path& path, const Graph& g);

/// Columns node_id,<attribute>...[,homotopy_partner]; partner entries are
/// 1-based or "none".
NodeCovariates read_covariates(const fs::path& path);
void write_covariates(const fs::path& path, const NodeCovariates& cov);

/// Manifest with columns subject,path,group; paths are relative to the
/// manifest's directory. Node count comes from the covariate file.
GraphPopulation read_population(const fs::path& manifest, const fs::path& covariates);
/// Writes networks/<subject>.edges, manifest.csv and covariates.csv under dir.
void write_population(const fs::path& dir, const GraphPopulation& pop);

/// N rows of N delimiter-separated reals.
Matrix read_matrix(const fs::path& path);
/// Manifest subject,path,group pointing at matrix files.
CorrelationSet read_correlations(const fs::path& manifest);

struct TraceFiles {
    fs::path trace = "trace.csv";
    fs::path theta = "theta.csv";
    fs::path acceptance = "acceptance.csv";
};

/// trace.csv (one row per retained record), theta.csv (thinned individual
/// parameters, long format) and acceptance.csv (per-block rates).
void write_trace(const fs::path& dir, const PosteriorTrace& trace, const TraceFiles& files = {});

/// Numeric view of trace.csv.
struct NumericTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
NumericTable read_numeric_table(const fs::path& path);

/// metric,bin,obs_median,obs_q1,obs_q3,sim_lower,sim_upper,level
void write_envelopes(const fs::path& path, const std::vector<PredictiveEnvelope>& envelopes);

}  // namespace popergm
