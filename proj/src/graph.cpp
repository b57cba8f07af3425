#include "graphbell/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include <json.hpp>

#include "graphbell/errors.hpp"

namespace graphbell {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) {
        throw ValidationError("graph: vertex count must be positive, got " + std::to_string(n));
    }
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u == v) {
            throw ValidationError("graph: self-loop at vertex " + std::to_string(u + 1));
        }
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw ValidationError("graph: edge (" + std::to_string(u + 1) + "," +
                                  std::to_string(v + 1) + ") out of range [1," +
                                  std::to_string(n) + "]");
        }
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) {
            throw ValidationError("graph: duplicate edge (" + std::to_string(u + 1) + "," +
                                  std::to_string(v + 1) + ")");
        }
    }
    edges_.assign(seen.begin(), seen.end());

    adjacency_.assign(static_cast<std::size_t>(n), {});
    for (auto [u, v] : edges_) {
        adjacency_[static_cast<std::size_t>(u)].push_back(v);
        adjacency_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (int v = 0; v < n; ++v) {
        auto& nb = adjacency_[static_cast<std::size_t>(v)];
        std::sort(nb.begin(), nb.end());
        if (nb.empty()) {
            throw ValidationError("graph: isolated vertex " + std::to_string(v + 1));
        }
    }

    // Breadth-first reachability from vertex 0.
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::queue<int> frontier;
    frontier.push(0);
    visited[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop();
        for (int w : adjacency_[static_cast<std::size_t>(v)]) {
            if (!visited[static_cast<std::size_t>(w)]) {
                visited[static_cast<std::size_t>(w)] = 1;
                ++reached;
                frontier.push(w);
            }
        }
    }
    connected_ = (reached == n);
}

int Graph::degree(int v) const {
    return static_cast<int>(neighborhood(v).size());
}

const std::vector<int>& Graph::neighborhood(int v) const {
    if (v < 0 || v >= n_) {
        throw ValidationError("graph: vertex " + std::to_string(v + 1) + " out of range [1," +
                              std::to_string(n_) + "]");
    }
    return adjacency_[static_cast<std::size_t>(v)];
}

int Graph::max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

BuiltinKind builtin_kind_from_string(const std::string& name) {
    if (name == "star") return BuiltinKind::Star;
    if (name == "ring") return BuiltinKind::Ring;
    if (name == "line") return BuiltinKind::Line;
    if (name == "complete") return BuiltinKind::Complete;
    throw ValidationError("unknown builtin graph kind '" + name + "'");
}

std::string to_string(BuiltinKind kind) {
    switch (kind) {
        case BuiltinKind::Star: return "star";
        case BuiltinKind::Ring: return "ring";
        case BuiltinKind::Line: return "line";
        case BuiltinKind::Complete: return "complete";
    }
    return "?";
}

Graph builtin_graph(BuiltinKind kind, int n) {
    const int min_n = (kind == BuiltinKind::Ring) ? 3 : 2;
    if (n < min_n) {
        throw ValidationError("builtin graph '" + to_string(kind) + "' requires n >= " +
                              std::to_string(min_n) + ", got " + std::to_string(n));
    }
    std::vector<std::pair<int, int>> edges;
    switch (kind) {
        case BuiltinKind::Star:
            for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
            break;
        case BuiltinKind::Ring:
            for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
            break;
        case BuiltinKind::Line:
            for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
            break;
        case BuiltinKind::Complete:
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
            break;
    }
    return Graph(n, std::move(edges));
}

int pivot_vertex(const Graph& g) {
    int best = 0;
    for (int v = 1; v < g.num_vertices(); ++v) {
        if (g.degree(v) > g.degree(best)) best = v;
    }
    return best;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
    const int n = g.num_vertices();
    if (static_cast<int>(perm.size()) != n) {
        throw ValidationError("relabel: permutation has " + std::to_string(perm.size()) +
                              " entries, expected " + std::to_string(n));
    }
    std::vector<char> hit(static_cast<std::size_t>(n), 0);
    for (int image : perm) {
        if (image < 0 || image >= n || hit[static_cast<std::size_t>(image)]) {
            throw ValidationError("relabel: input is not a bijection on [1," +
                                  std::to_string(n) + "]");
        }
        hit[static_cast<std::size_t>(image)] = 1;
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edges().size());
    for (auto [u, v] : g.edges()) {
        edges.emplace_back(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
    }
    return Graph(n, std::move(edges));
}

std::vector<int> pivot_to_front_permutation(const Graph& g) {
    std::vector<int> perm(static_cast<std::size_t>(g.num_vertices()));
    std::iota(perm.begin(), perm.end(), 0);
    const int p = pivot_vertex(g);
    std::swap(perm[0], perm[static_cast<std::size_t>(p)]);
    return perm;
}

int edge_parity(const Graph& g, std::uint64_t subset) {
    int count = 0;
    for (auto [u, v] : g.edges()) {
        if (((subset >> u) & 1ULL) && ((subset >> v) & 1ULL)) ++count;
    }
    return count & 1;
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("graph JSON parse failure: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
        throw ValidationError("graph JSON must be an object with 'n' and 'edges'");
    }
    if (!doc["n"].is_number_integer()) {
        throw ValidationError("graph JSON: 'n' must be an integer");
    }
    const int n = doc["n"].get<int>();
    if (!doc["edges"].is_array()) {
        throw ValidationError("graph JSON: 'edges' must be an array of pairs");
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer()) {
            throw ValidationError("graph JSON: each edge must be a pair of integers");
        }
        edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    return Graph(n, std::move(edges));
}

std::string graph_to_json(const Graph& g) {
    nlohmann::json doc;
    doc["n"] = g.num_vertices();
    auto edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) {
        edges.push_back({u + 1, v + 1});
    }
    doc["edges"] = std::move(edges);
    return doc.dump();
}

}  // namespace graphbell
