#pragma once

// Discretized configuration spaces of graphs. The track is subdivided into a
// graph; the two-robot complex has a vertex per ordered pair of distinct graph
// nodes, an edge per single-robot move along a graph edge that avoids the
// parked robot, and a square per simultaneous move along two node-disjoint
// graph edges. Counting cells and components gives b0, chi and b1.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "tcrobots/spaces.hpp"
#include "tcrobots/union_find.hpp"

namespace tcrobots {

/// Subdivided track: node coordinates and undirected edges.
struct TrackGraph {
    SpaceKind space = SpaceKind::Lollipop;
    int subdivisions = 0;
    std::vector<PhysPoint> points;
    std::vector<std::pair<int, int>> edges;

    std::size_t node_count() const { return points.size(); }
};

inline constexpr int kMinSubdivision = 5;

inline TrackGraph track_graph(SpaceKind space, int n) {
    if (n < kMinSubdivision) throw Error(ErrorCode::InvalidArgument, "subdivision must be at least 5");
    TrackGraph g{space, n, {}, {}};
    const double step = 1.0 / n;
    switch (space) {
    case SpaceKind::Interval:
        for (int k = 0; k <= n; ++k) g.points.push_back({Edge::Interval, k * step});
        for (int k = 0; k < n; ++k) g.edges.push_back({k, k + 1});
        break;
    case SpaceKind::Circle:
        for (int k = 0; k < n; ++k) g.points.push_back({Edge::Circle, k * step});
        for (int k = 0; k < n; ++k) g.edges.push_back({k, (k + 1) % n});
        break;
    case SpaceKind::Lollipop:
        // 0..n-1 along the stick from the free end, n is the junction, n+1..2n-1 around the circle
        for (int k = 0; k < n; ++k) g.points.push_back({Edge::Interval, k * step});
        g.points.push_back(junction());
        for (int k = 1; k < n; ++k) g.points.push_back({Edge::Circle, k * step});
        for (int k = 0; k < n; ++k) g.edges.push_back({k, k + 1});
        for (int k = 0; k < n; ++k) g.edges.push_back({n + k, k + 1 < n ? n + k + 1 : n});
        break;
    }
    return g;
}

struct DiscreteConfigComplex {
    TrackGraph graph;
    int robots = 2;
    std::vector<std::pair<int, int>> nodes;                   // (robot A node, robot B node)
    std::vector<std::pair<std::size_t, std::size_t>> edges;   // complex node indices
    std::vector<std::array<std::size_t, 4>> squares;          // corners in cyclic order

    std::size_t V() const { return nodes.size(); }
    std::size_t E() const { return edges.size(); }
    std::size_t F() const { return squares.size(); }

    /// Complex node index of the pair (p, q), or nullopt if p == q or out of range.
    std::optional<std::size_t> index_of(int p, int q) const {
        const int n = static_cast<int>(graph.node_count());
        if (p < 0 || q < 0 || p >= n || q >= n) return std::nullopt;
        if (robots == 1) return static_cast<std::size_t>(p);
        if (p == q) return std::nullopt;
        return static_cast<std::size_t>(p * (n - 1) + (q < p ? q : q - 1));
    }
};

inline DiscreteConfigComplex discretize(SpaceKind space, int n, int robots = 2) {
    if (robots != 1 && robots != 2) throw Error(ErrorCode::InvalidArgument, "robots must be 1 or 2");
    DiscreteConfigComplex c{track_graph(space, n), robots, {}, {}, {}};
    const int N = static_cast<int>(c.graph.node_count());

    if (robots == 1) {
        for (int p = 0; p < N; ++p) c.nodes.push_back({p, p});
        for (auto [u, v] : c.graph.edges) c.edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
        return c;
    }

    for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q)
            if (p != q) c.nodes.push_back({p, q});

    auto id = [&](int p, int q) { return *c.index_of(p, q); };
    for (auto [u, v] : c.graph.edges) {
        for (int w = 0; w < N; ++w) {
            if (w == u || w == v) continue;
            c.edges.push_back({id(u, w), id(v, w)}); // A moves, B parked at w
            c.edges.push_back({id(w, u), id(w, v)}); // B moves, A parked at w
        }
    }
    for (std::size_t i = 0; i < c.graph.edges.size(); ++i) {
        for (std::size_t j = 0; j < c.graph.edges.size(); ++j) {
            if (i == j) continue;
            auto [a0, a1] = c.graph.edges[i];
            auto [b0, b1] = c.graph.edges[j];
            if (a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1) continue;
            c.squares.push_back({id(a0, b0), id(a1, b0), id(a1, b1), id(a0, b1)});
        }
    }
    return c;
}

struct HomologySummary {
    std::size_t b0 = 0;
    long chi = 0;
    long b1 = 0;
};

/// b1 = b0 - chi, which holds because these complexes carry no 2-cycles.
inline HomologySummary homology(const DiscreteConfigComplex& c) {
    UnionFind uf(c.V());
    for (auto [u, v] : c.edges) uf.unite(u, v);
    HomologySummary h;
    h.b0 = uf.sets();
    h.chi = static_cast<long>(c.V()) - static_cast<long>(c.E()) + static_cast<long>(c.F());
    h.b1 = static_cast<long>(h.b0) - h.chi;
    return h;
}

inline int tc_from_betti(long b1) {
    if (b1 < 0) throw Error(ErrorCode::InvalidArgument, "negative Betti number");
    if (b1 == 0) return 1;
    if (b1 == 1) return 2;
    return 3;
}

using NodePair = std::pair<int, int>;

/// Fewest-moves path between two node pairs, or nullopt when they lie in
/// different components.
inline std::optional<std::vector<NodePair>> oracle_path(const DiscreteConfigComplex& c, NodePair from, NodePair to) {
    auto s = c.index_of(from.first, from.second);
    auto t = c.index_of(to.first, to.second);
    if (!s || !t) throw Error(ErrorCode::InvalidArgument, "node pair is not a configuration");
    if (*s == *t) return std::vector<NodePair>{};

    std::vector<std::vector<std::size_t>> adj(c.V());
    for (auto [u, v] : c.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<std::ptrdiff_t> prev(c.V(), -1);
    std::vector<bool> seen(c.V(), false);
    std::deque<std::size_t> queue{*s};
    seen[*s] = true;
    while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        if (u == *t) break;
        for (std::size_t v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            prev[v] = static_cast<std::ptrdiff_t>(u);
            queue.push_back(v);
        }
    }
    if (!seen[*t]) return std::nullopt;
    std::vector<NodePair> path;
    for (std::size_t v = *t; v != *s; v = static_cast<std::size_t>(prev[v])) path.push_back(c.nodes[v]);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace tcrobots
