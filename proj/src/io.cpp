#include "popergm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "popergm/error.hpp"

namespace popergm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    if (delim == ' ') {
        std::istringstream in(line);
        std::string tok;
        while (in >> tok) out.push_back(tok);
        return out;
    }
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

char detect_delimiter(const std::string& line) {
    if (line.find(',') != std::string::npos) return ',';
    if (line.find('\t') != std::string::npos) return '\t';
    return ' ';
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

bool is_content(const std::string& line) {
    std::string t = trim(line);
    return !t.empty() && t[0] != '#';
}

}  // namespace

std::optional<std::size_t> Table::find(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return std::size_t(it - header.begin());
}

std::size_t Table::column(const std::string& name) const {
    auto c = find(name);
    if (!c) throw DataError("missing column '" + name + "'");
    return *c;
}

Table read_table(const fs::path& path) {
    auto in = open_in(path);
    Table t;
    std::string line;
    char delim = ',';
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!is_content(line)) continue;
        if (!have_header) {
            delim = detect_delimiter(line);
            t.header = split(trim(line), delim);
            have_header = true;
            continue;
        }
        auto fields = split(trim(line), delim);
        if (fields.size() != t.header.size())
            throw DataError(path.string() + ": row has " + std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(t.header.size()));
        t.rows.push_back(std::move(fields));
    }
    if (!have_header) throw DataError(path.string() + ": missing header row");
    return t;
}

void write_table(const fs::path& path, const Table& table) {
    auto out = open_out(path);
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
        out << '\n';
    };
    write_row(table.header);
    for (const auto& r : table.rows) write_row(r);
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
    double v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e) {
        if (text == "nan" || text == "NA") return std::numeric_limits<double>::quiet_NaN();
        throw DataError(context + ": cannot parse number '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& text, const std::string& context) {
    long long v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e) throw DataError(context + ": cannot parse integer '" + text + "'");
    return v;
}

Graph read_edge_list(const fs::path& path, int n_nodes) {
    auto in = open_in(path);
    Graph g(n_nodes);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!is_content(line)) continue;
        auto f = split(trim(line), detect_delimiter(trim(line)));
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (f.size() != 2) throw DataError(where + ": expected 'i j'");
        long long i = parse_integer(f[0], where), j = parse_integer(f[1], where);
        if (i < 1 || j < 1 || i > n_nodes || j > n_nodes) throw DataError(where + ": node index out of range");
        if (i == j) throw DataError(where + ": self-loop");
        g.set_edge(int(i - 1), int(j - 1), true);
    }
    return g;
}

void write_edge_list(const fs::path& path, const Graph& g) {
    auto out = open_out(path);
    out << "# nodes " << g.n_nodes() << ", edges " << g.edge_count() << '\n';
    for (auto [i, j] : g.edges()) out << i + 1 << ' ' << j + 1 << '\n';
}

NodeCovariates read_covariates(const fs::path& path) {
    Table t = read_table(path);
    const std::size_t id_col = t.column("node_id");
    const int n = int(t.rows.size());
    if (n == 0) throw DataError(path.string() + ": no nodes");
    std::vector<int> order(std::size_t(n), -1);
    for (int r = 0; r < n; ++r) {
        long long id = parse_integer(t.rows[r][id_col], path.string());
        if (id < 1 || id > n || order[std::size_t(id - 1)] >= 0) throw DataError(path.string() + ": node ids must be 1..N");
        order[std::size_t(id - 1)] = r;
    }
    NodeCovariates cov(n);
    auto partner_col = t.find("homotopy_partner");
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c == id_col || (partner_col && c == *partner_col)) continue;
        std::vector<std::string> values(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) values[v] = t.rows[order[v]][c];
        cov.set_attribute(t.header[c], values);
    }
    if (partner_col) {
        std::vector<int> partner(std::size_t(n), -1);
        int given = 0;
        for (int v = 0; v < n; ++v) {
            const std::string& s = t.rows[order[v]][*partner_col];
            if (s.empty() || s == "none") continue;
            partner[v] = int(parse_integer(s, path.string())) - 1;
            ++given;
        }
        if (given == n) {
            try {
                cov.set_homotopy_partner(partner);
            } catch (const std::invalid_argument& e) {
                throw DataError(path.string() + ": " + e.what());
            }
        } else if (given != 0) {
            throw DataError(path.string() + ": homotopy_partner must be given for every node or for none");
        }
    }
    return cov;
}

void write_covariates(const fs::path& path, const NodeCovariates& cov) {
    Table t;
    t.header.push_back("node_id");
    auto names = cov.attribute_names();
    for (const auto& a : names) t.header.push_back(a);
    if (cov.has_explicit_homotopy()) t.header.push_back("homotopy_partner");
    std::vector<std::vector<std::string>> values;
    for (const auto& a : names) values.push_back(cov.attribute_values(a));
    std::vector<int> partner;
    if (cov.has_explicit_homotopy()) partner = cov.homotopy_partner();
    for (int v = 0; v < cov.n_nodes(); ++v) {
        std::vector<std::string> row{std::to_string(v + 1)};
        for (const auto& col : values) row.push_back(col[v]);
        if (!partner.empty()) row.push_back(std::to_string(partner[v] + 1));
        t.rows.push_back(std::move(row));
    }
    write_table(path, t);
}

GraphPopulation read_population(const fs::path& manifest, const fs::path& covariates) {
    GraphPopulation pop;
    pop.covariates = read_covariates(covariates);
    Table t = read_table(manifest);
    const auto sc = t.column("subject"), pc = t.column("path"), gc = t.column("group");
    const fs::path base = manifest.parent_path();
    for (const auto& row : t.rows) {
        fs::path p = row[pc];
        if (p.is_relative()) p = base / p;
        pop.subjects.push_back(row[sc]);
        pop.graphs.push_back(read_edge_list(p, pop.covariates.n_nodes()));
        pop.group.push_back(int(parse_integer(row[gc], manifest.string())));
    }
    try {
        pop.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(manifest.string() + ": " + e.what());
    }
    return pop;
}

void write_population(const fs::path& dir, const GraphPopulation& pop) {
    fs::create_directories(dir / "networks");
    Table manifest{{"subject", "path", "group"}, {}};
    for (std::size_t i = 0; i < pop.graphs.size(); ++i) {
        std::string subject = i < pop.subjects.size() ? pop.subjects[i] : "net" + std::to_string(i + 1);
        fs::path rel = fs::path("networks") / (subject + ".edges");
        write_edge_list(dir / rel, pop.graphs[i]);
        manifest.rows.push_back({subject, rel.generic_string(), std::to_string(pop.group[i])});
    }
    write_table(dir / "manifest.csv", manifest);
    write_covariates(dir / "covariates.csv", pop.covariates);
}

Matrix read_matrix(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!is_content(line)) continue;
        std::vector<double> r;
        for (const auto& f : split(trim(line), detect_delimiter(trim(line)))) r.push_back(parse_double(f, path.string()));
        rows.push_back(std::move(r));
    }
    const auto n = Eigen::Index(rows.size());
    Matrix m(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (Eigen::Index(rows[k].size()) != n) throw DataError(path.string() + ": matrix is not square");
        for (Eigen::Index l = 0; l < n; ++l) m(k, l) = rows[k][l];
    }
    return m;
}

CorrelationSet read_correlations(const fs::path& manifest) {
    Table t = read_table(manifest);
    const auto sc = t.column("subject"), pc = t.column("path"), gc = t.column("group");
    CorrelationSet cs;
    for (const auto& row : t.rows) {
        fs::path p = row[pc];
        if (p.is_relative()) p = manifest.parent_path() / p;
        cs.subjects.push_back(row[sc]);
        cs.matrices.push_back(read_matrix(p));
        cs.group.push_back(int(parse_integer(row[gc], manifest.string())));
    }
    cs.validate();
    return cs;
}

void write_trace(const fs::path& dir, const PosteriorTrace& trace, const TraceFiles& files) {
    fs::create_directories(dir);
    {
        auto out = open_out(dir / files.trace);
        auto cols = trace.column_names();
        for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
        out << '\n';
        for (std::size_t r = 0; r < trace.size(); ++r) {
            auto row = trace.row(r);
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
            out << '\n';
        }
    }
    {
        auto out = open_out(dir / files.theta);
        out << "iteration,network";
        for (const auto& t : trace.term_names) out << ",theta." << t;
        out << '\n';
        for (std::size_t r = 0; r < trace.theta.size(); ++r)
            for (std::size_t i = 0; i < trace.theta[r].size(); ++i) {
                out << trace.theta_iterations[r] << ',' << i + 1;
                for (Eigen::Index k = 0; k < trace.theta[r][i].size(); ++k)
                    out << ',' << format_double(trace.theta[r][i][k]);
                out << '\n';
            }
    }
    {
        auto out = open_out(dir / files.acceptance);
        out << "block,proposed,accepted,rate,proposed_after_adaptation,accepted_after_adaptation,rate_after_adaptation\n";
        for (const auto& b : trace.acceptance)
            out << b.block << ',' << b.proposed << ',' << b.accepted << ',' << format_double(b.rate()) << ','
                << b.proposed_frozen << ',' << b.accepted_frozen << ',' << format_double(b.frozen_rate()) << '\n';
    }
}

NumericTable read_numeric_table(const fs::path& path) {
    Table t = read_table(path);
    NumericTable out{t.header, {}};
    for (const auto& row : t.rows) {
        std::vector<double> r;
        for (const auto& f : row) r.push_back(parse_double(f, path.string()));
        out.rows.push_back(std::move(r));
    }
    return out;
}

void write_envelopes(const fs::path& path, const std::vector<PredictiveEnvelope>& envelopes) {
    auto out = open_out(path);
    out << "metric,bin,obs_median,obs_q1,obs_q3,sim_lower,sim_upper,level\n";
    for (const auto& env : envelopes)
        for (const auto& r : env.rows)
            out << metric_name(env.kind) << ',' << r.bin << ',' << format_double(r.obs_median) << ','
                << format_double(r.obs_q1) << ',' << format_double(r.obs_q3) << ',' << format_double(r.sim_lower)
                << ',' << format_double(r.sim_upper) << ',' << format_double(env.level) << '\n';
}

}  // namespace popergm
