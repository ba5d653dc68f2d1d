#pragma once

// The skeleton of the two-robot lollipop configuration space: every state in
// which the robots are exactly half a unit apart. It is a chain
//
//     e1 --I1-- v1 ==S1== v2 ==S2== v3 ==S3== v4 --I2-- e2
//
// of two whiskers and three circles, each circle made of two parallel edges.
// Every edge is parameterized by s over a half-unit range and both robots move
// at unit rate in s, so each edge has L1 length 1 and each circle length 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcrobots/config.hpp"
#include "tcrobots/union_find.hpp"

namespace tcrobots {

enum class SkelVertex { E1, V1, V2, V3, V4, E2 };
enum class SkelEdge { I1, S1a, S1b, S2a, S2b, S3a, S3b, I2 };

inline constexpr std::size_t kSkeletonVertexCount = 6;
inline constexpr std::size_t kSkeletonEdgeCount = 8;

struct SkeletonEdgeInfo {
    SkelEdge id;
    std::string_view name;
    SkelVertex lo; // vertex at s_lo
    SkelVertex hi; // vertex at s_hi
    double s_lo;
    double s_hi;
    int ccw_sign; // +1: counterclockwise is increasing s, -1: decreasing, 0: whisker
    int circle;   // 1..3, or 0 for the whiskers

    double length() const { return 2.0 * (s_hi - s_lo); }
    double ccw_begin() const { return ccw_sign >= 0 ? s_lo : s_hi; }
};

inline constexpr std::array<SkeletonEdgeInfo, kSkeletonEdgeCount> kSkeletonEdges{{
    {SkelEdge::I1, "I1", SkelVertex::E1, SkelVertex::V1, 0.0, 0.5, 0, 0},
    {SkelEdge::S1a, "S1a", SkelVertex::V1, SkelVertex::V2, 0.5, 1.0, +1, 1},
    {SkelEdge::S1b, "S1b", SkelVertex::V1, SkelVertex::V2, 0.5, 1.0, -1, 1},
    {SkelEdge::S2a, "S2a", SkelVertex::V2, SkelVertex::V3, 0.0, 0.5, +1, 2},
    {SkelEdge::S2b, "S2b", SkelVertex::V3, SkelVertex::V2, 0.5, 1.0, +1, 2},
    {SkelEdge::S3a, "S3a", SkelVertex::V4, SkelVertex::V3, 0.5, 1.0, +1, 3},
    {SkelEdge::S3b, "S3b", SkelVertex::V4, SkelVertex::V3, 0.5, 1.0, -1, 3},
    {SkelEdge::I2, "I2", SkelVertex::E2, SkelVertex::V4, 0.0, 0.5, 0, 0},
}};

inline constexpr std::array<std::string_view, kSkeletonVertexCount> kSkeletonVertexNames{
    "e1", "v1", "v2", "v3", "v4", "e2"};

inline const SkeletonEdgeInfo& edge_info(SkelEdge e) { return kSkeletonEdges[static_cast<std::size_t>(e)]; }
inline std::string_view to_string(SkelEdge e) { return edge_info(e).name; }
inline std::string_view to_string(SkelVertex v) { return kSkeletonVertexNames[static_cast<std::size_t>(v)]; }

struct SkeletonPoint {
    SkelEdge edge = SkelEdge::I1;
    double s = 0.0;

    friend bool operator==(const SkeletonPoint&, const SkeletonPoint&) = default;
};

namespace detail {

inline PhysPoint lolli(Edge e, double t) {
    if (e == Edge::Circle) return {Edge::Circle, wrap01(t)};
    return canonicalize(SpaceKind::Lollipop, PhysPoint{Edge::Interval, t});
}

} // namespace detail

inline ConfigState embed(SkeletonPoint p) {
    using detail::lolli;
    const double s = p.s;
    switch (p.edge) {
    case SkelEdge::I1: return {lolli(Edge::Interval, s), lolli(Edge::Interval, s + 0.5)};
    case SkelEdge::S1a: return {lolli(Edge::Interval, s), lolli(Edge::Circle, s - 0.5)};
    case SkelEdge::S1b: return {lolli(Edge::Interval, s), lolli(Edge::Circle, 1.5 - s)};
    case SkelEdge::S2a: return {lolli(Edge::Circle, s), lolli(Edge::Circle, s + 0.5)};
    case SkelEdge::S2b: return {lolli(Edge::Circle, s), lolli(Edge::Circle, s - 0.5)};
    case SkelEdge::S3a: return {lolli(Edge::Circle, s - 0.5), lolli(Edge::Interval, s)};
    case SkelEdge::S3b: return {lolli(Edge::Circle, 1.5 - s), lolli(Edge::Interval, s)};
    case SkelEdge::I2: return {lolli(Edge::Interval, s + 0.5), lolli(Edge::Interval, s)};
    }
    return {};
}

inline SkeletonPoint vertex_point(SkelVertex v) {
    for (const auto& e : kSkeletonEdges) {
        if (e.lo == v) return {e.id, e.s_lo};
        if (e.hi == v) return {e.id, e.s_hi};
    }
    return {};
}

inline ConfigState vertex_state(SkelVertex v) { return embed(vertex_point(v)); }

/// Vertex within L1 distance `tol` of p along its edge, if any.
inline std::optional<SkelVertex> vertex_of(SkeletonPoint p, double tol = 1e-12) {
    const auto& e = edge_info(p.edge);
    if (2.0 * std::abs(p.s - e.s_lo) <= tol) return e.lo;
    if (2.0 * std::abs(e.s_hi - p.s) <= tol) return e.hi;
    return std::nullopt;
}

/// Membership in the extended vertex set: a vertex, or anywhere on I1 or I2.
inline bool in_extended_vertices(SkeletonPoint p, double tol) {
    return edge_info(p.edge).circle == 0 || vertex_of(p, tol).has_value();
}

/// Circle index (1..3) when p lies on a circle farther than tol from its vertices, else 0.
inline int interior_circle(SkeletonPoint p, double tol) {
    if (vertex_of(p, tol)) return 0;
    return edge_info(p.edge).circle;
}

/// Circles (1..3) that contain p, vertices included.
inline std::vector<int> circles_containing(SkeletonPoint p) {
    if (auto v = vertex_of(p)) {
        switch (*v) {
        case SkelVertex::V1: return {1};
        case SkelVertex::V2: return {1, 2};
        case SkelVertex::V3: return {2, 3};
        case SkelVertex::V4: return {3};
        default: return {};
        }
    }
    int c = edge_info(p.edge).circle;
    if (c == 0) return {};
    return {c};
}

// Each circle is walked counterclockwise as: first edge, then second edge.
inline std::pair<SkelEdge, SkelEdge> circle_edges(int circle) {
    switch (circle) {
    case 1: return {SkelEdge::S1a, SkelEdge::S1b};
    case 2: return {SkelEdge::S2a, SkelEdge::S2b};
    case 3: return {SkelEdge::S3a, SkelEdge::S3b};
    }
    throw Error(ErrorCode::InvalidArgument, "no such skeleton circle");
}

/// Counterclockwise loop coordinate in [0, 2) of p on the given circle.
inline double loop_coordinate(SkeletonPoint p, int circle) {
    auto [first, second] = circle_edges(circle);
    if (auto v = vertex_of(p)) {
        const auto& f = edge_info(first);
        SkelVertex start = f.ccw_sign > 0 ? f.lo : f.hi;
        SkelVertex mid = f.ccw_sign > 0 ? f.hi : f.lo;
        if (*v == start) return 0.0;
        if (*v == mid) return 1.0;
        throw Error(ErrorCode::RegionMismatch, "vertex not on circle");
    }
    if (p.edge == first) return 2.0 * std::abs(p.s - edge_info(first).ccw_begin());
    if (p.edge == second) return 1.0 + 2.0 * std::abs(p.s - edge_info(second).ccw_begin());
    throw Error(ErrorCode::RegionMismatch, "point not on circle");
}

inline SkeletonPoint loop_point(int circle, double ell) {
    auto [first, second] = circle_edges(circle);
    ell = 2.0 * wrap01(ell / 2.0);
    if (ell <= 1.0) {
        const auto& f = edge_info(first);
        return {first, f.ccw_begin() + f.ccw_sign * ell / 2.0};
    }
    const auto& g = edge_info(second);
    return {second, g.ccw_begin() + g.ccw_sign * (ell - 1.0) / 2.0};
}

/// Shorter of the two loop distances between p and q on a circle.
inline double loop_distance(SkeletonPoint p, SkeletonPoint q, int circle) {
    double d = std::abs(loop_coordinate(p, circle) - loop_coordinate(q, circle));
    return std::min(d, 2.0 - d);
}

inline SkeletonPoint antipode_in_circle(SkeletonPoint p, int circle) {
    return loop_point(circle, loop_coordinate(p, circle) + 1.0);
}

/// Inverse of embed for states whose separation is within tol of 1/2.
inline SkeletonPoint skeleton_locate(const ConfigState& state, double tol) {
    const SpaceKind L = SpaceKind::Lollipop;
    ConfigState x = canonicalize(L, state);
    if (std::abs(separation(L, x) - kHalfUnit) > tol)
        throw Error(ErrorCode::NotOnSkeleton, "separation is not one half");

    auto clamp = [](SkelEdge e, double s) {
        const auto& info = edge_info(e);
        return SkeletonPoint{e, std::clamp(s, info.s_lo, info.s_hi)};
    };
    const double a = x.a.t;
    const double b = x.b.t;
    switch (to_flat(x).block) {
    case Block::II:
        if (b > a) return clamp(SkelEdge::I1, (a + b - 0.5) / 2.0);
        return clamp(SkelEdge::I2, (a - 0.5 + b) / 2.0);
    case Block::IC:
        if (b <= 0.5) return clamp(SkelEdge::S1a, (a + b + 0.5) / 2.0);
        return clamp(SkelEdge::S1b, (a + 1.5 - b) / 2.0);
    case Block::CI:
        if (a <= 0.5) return clamp(SkelEdge::S3a, (b + a + 0.5) / 2.0);
        return clamp(SkelEdge::S3b, (b + 1.5 - a) / 2.0);
    case Block::CC: {
        double off = wrap_half(b - a - 0.5);
        double s = wrap01(a + off / 2.0);
        if (s <= 0.5) return {SkelEdge::S2a, s};
        return {SkelEdge::S2b, s};
    }
    }
    throw Error(ErrorCode::NotOnSkeleton, "unreachable block");
}

/// Static description of the skeleton as a weighted multigraph.
class SkeletonGraph {
public:
    std::size_t vertex_count() const { return kSkeletonVertexCount; }
    std::size_t edge_count() const { return kSkeletonEdgeCount; }
    const std::array<SkeletonEdgeInfo, kSkeletonEdgeCount>& edges() const { return kSkeletonEdges; }

    std::size_t components() const {
        UnionFind uf(kSkeletonVertexCount);
        for (const auto& e : kSkeletonEdges)
            uf.unite(static_cast<std::size_t>(e.lo), static_cast<std::size_t>(e.hi));
        return uf.sets();
    }

    /// First Betti number m - n + k.
    long betti1() const {
        return static_cast<long>(edge_count()) - static_cast<long>(vertex_count()) +
               static_cast<long>(components());
    }

    /// `count` evenly spaced embedded states along an edge, endpoints included.
    std::vector<ConfigState> sample_edge(SkelEdge e, std::size_t count) const {
        const auto& info = edge_info(e);
        std::vector<ConfigState> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            double lambda = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            out.push_back(embed({e, info.s_lo + lambda * (info.s_hi - info.s_lo)}));
        }
        return out;
    }
};

inline SkeletonGraph skeleton_build() { return SkeletonGraph{}; }

struct SkeletonLeg {
    SkelEdge edge;
    double s_from;
    double s_to;

    double length() const { return 2.0 * std::abs(s_to - s_from); }
};

struct SkeletonRoute {
    SkeletonPoint start;
    std::vector<SkeletonLeg> legs;

    double length() const {
        double total = 0.0;
        for (const auto& leg : legs) total += leg.length();
        return total;
    }

    std::vector<SkeletonPoint> waypoints() const {
        std::vector<SkeletonPoint> out{start};
        for (const auto& leg : legs) out.push_back({leg.edge, leg.s_to});
        return out;
    }

    /// Edge sequence with traversal signs, e.g. "I1+ S1a+ S2b-".
    std::string signature() const {
        std::string out;
        for (const auto& leg : legs) {
            if (!out.empty()) out += ' ';
            out += to_string(leg.edge);
            out += leg.s_to >= leg.s_from ? '+' : '-';
        }
        return out;
    }
};

namespace detail {

inline SkeletonRoute route_counterclockwise(SkeletonPoint from, SkeletonPoint to) {
    auto cf = circles_containing(from);
    auto ct = circles_containing(to);
    int circle = 0;
    for (int c : cf)
        if (std::find(ct.begin(), ct.end(), c) != ct.end()) circle = c;
    if (circle == 0) throw Error(ErrorCode::RegionMismatch, "V2 route needs both points on one circle");

    const auto [first, second] = circle_edges(circle);
    const auto& f = edge_info(first);
    const auto& g = edge_info(second);
    double ell = loop_coordinate(from, circle);
    double remaining = loop_coordinate(to, circle) - ell;
    if (remaining < 0.0) remaining += 2.0;

    SkeletonRoute route{from, {}};
    while (remaining > 1e-14 && route.legs.size() < 3) {
        bool on_first = ell < 1.0;
        const auto& e = on_first ? f : g;
        double base = on_first ? 0.0 : 1.0;
        double ell_end = std::min(base + 1.0, ell + remaining);
        route.legs.push_back({e.id, e.ccw_begin() + e.ccw_sign * (ell - base) / 2.0,
                              e.ccw_begin() + e.ccw_sign * (ell_end - base) / 2.0});
        remaining -= ell_end - ell;
        ell = ell_end >= 2.0 ? 0.0 : ell_end;
    }
    if (!route.legs.empty()) {
        if (route.legs.front().edge == from.edge) route.legs.front().s_from = from.s;
        if (route.legs.back().edge == to.edge) route.legs.back().s_to = to.s;
    }
    return route;
}

inline SkeletonRoute route_shortest(SkeletonPoint from, SkeletonPoint to) {
    constexpr double kTie = 1e-12;
    constexpr std::size_t kFrom = kSkeletonVertexCount;
    constexpr std::size_t kTo = kSkeletonVertexCount + 1;
    constexpr std::size_t kNodes = kSkeletonVertexCount + 2;

    auto node_of = [](SkeletonPoint p, std::size_t interior_id) {
        if (auto v = vertex_of(p)) return static_cast<std::size_t>(*v);
        return interior_id;
    };
    const std::size_t nf = node_of(from, kFrom);
    const std::size_t nt = node_of(to, kTo);
    if (nf == nt || (nf == kFrom && nt == kTo && from == to)) return {from, {}};

    struct Segment {
        std::size_t u, v;
        SkelEdge edge;
        double su, sv;
    };
    std::vector<Segment> segments;
    for (const auto& e : kSkeletonEdges) {
        std::vector<std::pair<double, std::size_t>> stops{{e.s_lo, static_cast<std::size_t>(e.lo)},
                                                          {e.s_hi, static_cast<std::size_t>(e.hi)}};
        if (nf == kFrom && from.edge == e.id) stops.push_back({from.s, kFrom});
        if (nt == kTo && to.edge == e.id) stops.push_back({to.s, kTo});
        std::stable_sort(stops.begin(), stops.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        for (std::size_t i = 0; i + 1 < stops.size(); ++i)
            segments.push_back({stops[i].second, stops[i + 1].second, e.id, stops[i].first, stops[i + 1].first});
    }

    // Labels are (length, clockwise traversals); lengths within kTie are equal.
    std::array<double, kNodes> cost;
    std::array<int, kNodes> cw;
    std::array<int, kNodes> via; // index into moves
    std::array<bool, kNodes> done{};
    cost.fill(std::numeric_limits<double>::infinity());
    cw.fill(0);
    via.fill(-1);
    struct Move {
        std::size_t from_node;
        SkeletonLeg leg;
    };
    std::vector<Move> moves;

    auto better = [&](double c1, int w1, double c2, int w2) {
        if (c1 < c2 - kTie) return true;
        return std::abs(c1 - c2) <= kTie && w1 < w2;
    };

    cost[nf] = 0.0;
    for (std::size_t iter = 0; iter < kNodes; ++iter) {
        std::size_t u = kNodes;
        for (std::size_t i = 0; i < kNodes; ++i)
            if (!done[i] && std::isfinite(cost[i]) && (u == kNodes || better(cost[i], cw[i], cost[u], cw[u])))
                u = i;
        if (u == kNodes) break;
        done[u] = true;
        for (const auto& seg : segments) {
            for (int dir = 0; dir < 2; ++dir) {
                std::size_t a = dir == 0 ? seg.u : seg.v;
                std::size_t b = dir == 0 ? seg.v : seg.u;
                if (a != u || done[b]) continue;
                double s0 = dir == 0 ? seg.su : seg.sv;
                double s1 = dir == 0 ? seg.sv : seg.su;
                int sign = edge_info(seg.edge).ccw_sign;
                int against = (sign != 0 && (s1 - s0) * sign < 0.0) ? 1 : 0;
                double c = cost[u] + 2.0 * std::abs(s1 - s0);
                int w = cw[u] + against;
                if (better(c, w, cost[b], cw[b])) {
                    cost[b] = c;
                    cw[b] = w;
                    moves.push_back({u, {seg.edge, s0, s1}});
                    via[b] = static_cast<int>(moves.size() - 1);
                }
            }
        }
    }

    SkeletonRoute route{from, {}};
    for (std::size_t n = nt; n != nf;) {
        const Move& m = moves.at(static_cast<std::size_t>(via[n]));
        route.legs.push_back(m.leg);
        n = m.from_node;
    }
    std::reverse(route.legs.begin(), route.legs.end());
    return route;
}

} // namespace detail

/// Path on the skeleton from `from` to `to` for the given continuity domain.
///
/// V1 and V3 follow an L1-shortest path, taking the counterclockwise side
/// whenever both sides of a circle are equally short. V2 walks the shared
/// circle counterclockwise.
inline SkeletonRoute skeleton_route(const SkeletonGraph&, SkeletonPoint from, SkeletonPoint to, RegionLabel region) {
    switch (region) {
    case RegionLabel::V1:
    case RegionLabel::V3: return detail::route_shortest(from, to);
    case RegionLabel::V2: return detail::route_counterclockwise(from, to);
    default: break;
    }
    throw Error(ErrorCode::RegionMismatch, "skeleton routes exist only for V1, V2, V3");
}

} // namespace tcrobots
