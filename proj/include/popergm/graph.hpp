#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace popergm {

using Dyad = std::pair<int, int>;

/// Undirected binary graph on a fixed node set, stored as dense bitset rows.
///
/// Node indices are 0-based. Edge lookup and toggling are O(1); neighbour
/// iteration is O(N / 64) words. Self-loops are never stored.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n_nodes);

    int n_nodes() const { return n_; }
    std::int64_t edge_count() const { return edges_; }
    std::int64_t dyad_count() const { return std::int64_t(n_) * (n_ - 1) / 2; }

    bool has_edge(int i, int j) const {
        return (row_ptr(i)[j >> 6] >> (j & 63)) & 1u;
    }

    /// Flips dyad {i,j} in place. Indices must be valid and distinct.
    void toggle(int i, int j) {
        std::uint64_t bit_j = std::uint64_t{1} << (j & 63);
        std::uint64_t bit_i = std::uint64_t{1} << (i & 63);
        row_ptr(i)[j >> 6] ^= bit_j;
        row_ptr(j)[i >> 6] ^= bit_i;
        edges_ += has_edge(i, j) ? 1 : -1;
    }

    void set_edge(int i, int j, bool on) {
        if (has_edge(i, j) != on) toggle(i, j);
    }

    std::span<const std::uint64_t> row(int i) const {
        return {row_ptr(i), static_cast<std::size_t>(words_)};
    }

    int degree(int i) const;

    /// Number of nodes adjacent to both i and j.
    int common_neighbors(int i, int j) const {
        const std::uint64_t* a = row_ptr(i);
        const std::uint64_t* b = row_ptr(j);
        int count = 0;
        for (int w = 0; w < words_; ++w) count += std::popcount(a[w] & b[w]);
        return count;
    }

    template <class F>
    void for_each_neighbor(int i, F&& f) const {
        const std::uint64_t* r = row_ptr(i);
        for (int w = 0; w < words_; ++w) {
            for (std::uint64_t bits = r[w]; bits != 0; bits &= bits - 1)
                f(w * 64 + std::countr_zero(bits));
        }
    }

    template <class F>
    void for_each_common_neighbor(int i, int j, F&& f) const {
        const std::uint64_t* a = row_ptr(i);
        const std::uint64_t* b = row_ptr(j);
        for (int w = 0; w < words_; ++w) {
            for (std::uint64_t bits = a[w] & b[w]; bits != 0; bits &= bits - 1)
                f(w * 64 + std::countr_zero(bits));
        }
    }

    /// Edges as (i, j) with i < j, in lexicographic order.
    std::vector<Dyad> edges() const;

    bool operator==(const Graph& other) const = default;

private:
    const std::uint64_t* row_ptr(int i) const { return bits_.data() + std::size_t(i) * words_; }
    std::uint64_t* row_ptr(int i) { return bits_.data() + std::size_t(i) * words_; }

    int n_ = 0;
    int words_ = 0;
    std::int64_t edges_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Returns a copy of g with dyad {i,j} flipped; throws on invalid indices.
Graph toggle_edge(Graph g, int i, int j);

/// Builds a graph from 0-based unordered pairs. Duplicates collapse.
Graph from_edge_list(int n_nodes, std::span<const Dyad> edges);

/// edge_count / (N(N-1)/2); requires N >= 2.
double density(const Graph& g);

/// All dyads (i, j), i < j, in row-major order.
std::vector<Dyad> all_dyads(int n_nodes);

/// Nodal covariates shared by every network of a population.
///
/// Categorical attributes are stored as small integer codes together with the
/// original level names. The homotopy partner mapping is optional; when it
/// is absent and N is even, node i pairs with node i + N/2.
class NodeCovariates {
public:
    NodeCovariates() = default;
    explicit NodeCovariates(int n_nodes) : n_(n_nodes) {}

    int n_nodes() const { return n_; }

    void set_attribute(const std::string& name, const std::vector<std::string>& values);
    bool has_attribute(const std::string& name) const { return codes_.count(name) > 0; }
    const std::vector<int>& attribute_codes(const std::string& name) const;
    const std::vector<std::string>& attribute_levels(const std::string& name) const;
    std::vector<std::string> attribute_values(const std::string& name) const;
    std::vector<std::string> attribute_names() const;

    /// Installs an explicit partner mapping; must be a fixed-point-free involution.
    void set_homotopy_partner(std::vector<int> partner);
    bool has_explicit_homotopy() const { return partner_.has_value(); }

    /// Explicit mapping if present, else the i <-> i + N/2 default for even N.
    /// Throws std::invalid_argument when neither is available.
    std::vector<int> homotopy_partner() const;

    bool operator==(const NodeCovariates& other) const = default;

private:
    int n_ = 0;
    std::map<std::string, std::vector<int>> codes_;
    std::map<std::string, std::vector<std::string>> levels_;
    std::optional<std::vector<int>> partner_;
};

/// Two hemispheres: nodes [0, N/2) labelled "left", the rest "right", under
/// the attribute name "hemisphere".
NodeCovariates hemisphere_covariates(int n_nodes);

/// n graphs on a shared node set, each belonging to one of J groups.
/// Group labels are 1-based in {1, ..., J}.
struct GraphPopulation {
    std::vector<Graph> graphs;
    std::vector<int> group;
    NodeCovariates covariates;
    std::vector<std::string> subjects;

    std::size_t size() const { return graphs.size(); }
    int n_groups() const;
    /// Checks node counts, group labels and non-empty groups.
    void validate() const;
    std::vector<std::vector<int>> members_by_group() const;
};

}  // namespace popergm
