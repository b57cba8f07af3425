#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace graphbell {

/// Simple undirected graph on n labeled vertices.
///
/// Vertices are 0-indexed in code; all external formats (JSON, CLI flags)
/// are 1-indexed and translated at the parse/format boundary. Construction
/// rejects self-loops, duplicate edges, out-of-range endpoints and isolated
/// vertices. Disconnected graphs are accepted but flagged; consumers that
/// need connectivity (self-testing) refuse them.
class Graph {
public:
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int num_vertices() const { return n_; }
    /// Normalized edge list: each pair (u, v) with u < v, sorted ascending.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    bool connected() const { return connected_; }

    int degree(int v) const;
    /// Sorted neighbor list of v; never contains v itself.
    const std::vector<int>& neighborhood(int v) const;
    int max_degree() const;

    bool operator==(const Graph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
    bool connected_ = false;
};

enum class BuiltinKind { Star, Ring, Line, Complete };

/// Throws ValidationError for unknown names.
BuiltinKind builtin_kind_from_string(const std::string& name);
std::string to_string(BuiltinKind kind);

/// star: vertex 0 joined to all others; ring: cycle 0-1-...-(n-1)-0;
/// line: path 0-1-...-(n-1); complete: all pairs. n >= 2 (ring: n >= 3).
Graph builtin_graph(BuiltinKind kind, int n);

/// Lowest-index vertex of maximal degree (deterministic tie-break).
int pivot_vertex(const Graph& g);

/// Edge set mapped through perm, where perm[old] = new. Rejects
/// non-bijective input.
Graph relabel(const Graph& g, const std::vector<int>& perm);

/// Permutation that swaps pivot_vertex(g) with 0 and fixes the rest.
std::vector<int> pivot_to_front_permutation(const Graph& g);

/// Parity of the number of edges with both endpoints in `subset`
/// (bit v of the mask set <=> vertex v in the subset).
int edge_parity(const Graph& g, std::uint64_t subset);

/// Parses {"n": int, "edges": [[i, j], ...]} with 1-indexed vertices.
Graph graph_from_json(const std::string& text);

/// Canonical form: compact JSON, 1-indexed, edges normalized i < j and
/// sorted; stable across runs for hashing.
std::string graph_to_json(const Graph& g);

}  // namespace graphbell
