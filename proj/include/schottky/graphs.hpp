#pragma once

#include "schottky/binary_matrix.hpp"
#include "schottky/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace schottky {

struct Edge {
    int id = 0;
    int src = 0;
    int dst = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Connected finite multigraph; loops and parallel edges are allowed.
class FiniteGraph {
public:
    FiniteGraph() = default;

    FiniteGraph(std::vector<int> vertices, std::vector<Edge> edges, std::string name = {})
        : vertices_(std::move(vertices)), edges_(std::move(edges)), name_(std::move(name)) {
        std::set<int> vset(vertices_.begin(), vertices_.end());
        if (vset.size() != vertices_.size())
            throw Error(ErrorCode::InvalidGraph, "duplicate vertex id");
        std::set<int> ids;
        for (const auto& e : edges_) {
            if (!ids.insert(e.id).second)
                throw Error(ErrorCode::InvalidGraph, "duplicate edge id", std::to_string(e.id));
            if (!vset.count(e.src) || !vset.count(e.dst))
                throw Error(ErrorCode::InvalidGraph, "edge endpoint is not a vertex",
                            std::to_string(e.id));
        }
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        if (!connected())
            throw Error(ErrorCode::InvalidGraph, "graph is not connected", name_);
    }

    const std::vector<int>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::string& name() const noexcept { return name_; }
    bool empty() const noexcept { return vertices_.empty(); }

    /// A loop counts twice.
    std::size_t degree(int v) const {
        std::size_t d = 0;
        for (const auto& e : edges_) d += (e.src == v) + (e.dst == v);
        return d;
    }

    long betti_number() const {
        if (vertices_.empty()) return 0;
        return static_cast<long>(edges_.size()) - static_cast<long>(vertices_.size()) + 1;
    }

private:
    bool connected() const {
        if (vertices_.empty()) return true;
        std::map<int, int> parent;
        for (int v : vertices_) parent[v] = v;
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (const auto& e : edges_) parent[find(e.src)] = find(e.dst);
        const int root = find(vertices_.front());
        return std::all_of(vertices_.begin(), vertices_.end(),
                           [&](int v) { return find(v) == root; });
    }

    std::vector<int> vertices_;
    std::vector<Edge> edges_;
    std::string name_;
};

struct OrientedEdge {
    int edge_id = 0;
    bool backward = false;
    int source = 0;
    int target = 0;

    OrientedEdge reversal() const { return {edge_id, !backward, target, source}; }

    std::string label() const { return "e" + std::to_string(edge_id) + (backward ? "-" : "+"); }

    friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

struct EdgeMatrix {
    BinaryMatrix matrix;
    std::vector<OrientedEdge> labels;
};

/// Oriented edges in index order: edges by ascending id, forward before backward.
inline std::vector<OrientedEdge> oriented_edges(const FiniteGraph& g) {
    std::vector<OrientedEdge> out;
    out.reserve(2 * g.edges().size());
    for (const auto& e : g.edges()) {
        out.push_back({e.id, false, e.src, e.dst});
        out.push_back({e.id, true, e.dst, e.src});
    }
    return out;
}

/// Non-backtracking transition matrix on oriented edges: e -> e' allowed iff
/// e' starts where e ends and e' is not the reversal of e.
inline EdgeMatrix directed_edge_matrix(const FiniteGraph& g) {
    if (g.empty() || g.edges().empty())
        throw Error(ErrorCode::InvalidGraph, "graph has no edges", g.name());
    EdgeMatrix out;
    out.labels = oriented_edges(g);
    const std::size_t n = out.labels.size();
    out.matrix = BinaryMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto rev = out.labels[i].reversal();
        for (std::size_t j = 0; j < n; ++j) {
            const auto& next = out.labels[j];
            out.matrix.set(i, j, out.labels[i].target == next.source && !(next == rev));
        }
    }
    return out;
}

/// Transition matrix of the free group on g generators: letter i and i+g are
/// mutually inverse, A_ij = 1 iff |i - j| != g.
inline EdgeMatrix cayley_schottky_matrix(int g) {
    if (g < 1) throw Error(ErrorCode::InvalidRank, "rank must be at least 1", std::to_string(g));
    const auto n = static_cast<std::size_t>(2 * g);
    EdgeMatrix out;
    out.matrix = BinaryMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int gi = static_cast<int>(i);
        out.labels.push_back({gi % g, gi >= g, 0, 0});
        for (std::size_t j = 0; j < n; ++j)
            out.matrix.set(i, j, std::abs(gi - static_cast<int>(j)) != g);
    }
    return out;
}

inline FiniteGraph bouquet_graph(int loops) {
    std::vector<Edge> edges;
    for (int i = 0; i < loops; ++i) edges.push_back({i, 0, 0});
    return FiniteGraph({0}, edges, "bouquet" + std::to_string(loops));
}

inline FiniteGraph theta_graph() {
    return FiniteGraph({0, 1}, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}}, "theta");
}

inline FiniteGraph dumbbell_graph() {
    return FiniteGraph({0, 1}, {{0, 0, 0}, {1, 0, 1}, {2, 1, 1}}, "dumbbell");
}

/// The three combinatorial types of genus-2 dual graphs.
inline std::vector<FiniteGraph> genus2_catalog() {
    return {bouquet_graph(2), theta_graph(), dumbbell_graph()};
}

/// Theta graph with 2r+1 vertices inserted on each of its three edges.
/// r = 0 returns the plain theta graph.
inline FiniteGraph kato_graph(int r) {
    if (r < 0) throw Error(ErrorCode::InvalidParameter, "r must be nonnegative", std::to_string(r));
    if (r == 0) return theta_graph();
    const int inserted = 2 * r + 1;
    std::vector<int> vertices{0, 1};
    std::vector<Edge> edges;
    int next_vertex = 2;
    int next_edge = 0;
    for (int line = 0; line < 3; ++line) {
        int prev = 0;
        for (int k = 0; k < inserted; ++k) {
            vertices.push_back(next_vertex);
            edges.push_back({next_edge++, prev, next_vertex});
            prev = next_vertex++;
        }
        edges.push_back({next_edge++, prev, 1});
    }
    return FiniteGraph(std::move(vertices), std::move(edges), "kato" + std::to_string(r));
}

} // namespace schottky
