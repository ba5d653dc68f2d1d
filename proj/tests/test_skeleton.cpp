#include <gtest/gtest.h>

#include <array>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "tcrobots/skeleton.hpp"
#include "tcrobots/union_find.hpp"

using namespace tcrobots;

namespace {

const SpaceKind L = SpaceKind::Lollipop;

PhysPoint I(double t) { return {Edge::Interval, t}; }
PhysPoint C(double t) { return {Edge::Circle, t}; }

SkeletonPoint random_skeleton_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& e = kSkeletonEdges[pick(rng)];
    return {e.id, e.s_lo + u(rng) * (e.s_hi - e.s_lo)};
}

// Half-unit locus on a dyadic lattice: lollipop points k/64, pairs at
// distance exactly 1/2, joined when both robots step to neighbouring points.
struct LatticeSkeleton {
    std::vector<std::pair<int, int>> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<int> degree;
};

LatticeSkeleton lattice_skeleton(int m) {
    std::vector<PhysPoint> pts;
    std::vector<std::vector<int>> nbr;
    for (int k = 0; k < m; ++k) pts.push_back(I(static_cast<double>(k) / m));
    for (int k = 0; k < m; ++k) pts.push_back(C(static_cast<double>(k) / m)); // k = 0 is the junction
    nbr.resize(pts.size());
    auto link = [&](int u, int v) {
        nbr[u].push_back(v);
        nbr[v].push_back(u);
    };
    for (int k = 0; k + 1 < m; ++k) link(k, k + 1);
    link(m - 1, m);
    for (int k = 0; k < m; ++k) link(m + k, m + (k + 1) % m);

    LatticeSkeleton s;
    std::map<std::pair<int, int>, std::size_t> index;
    const int n = static_cast<int>(pts.size());
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (dist(L, pts[p], pts[q]) == 0.5) {
                index[{p, q}] = s.nodes.size();
                s.nodes.push_back({p, q});
            }
    s.degree.assign(s.nodes.size(), 0);
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        auto [p, q] = s.nodes[i];
        for (int p2 : nbr[p])
            for (int q2 : nbr[q]) {
                auto it = index.find({p2, q2});
                if (it == index.end() || it->second <= i) continue;
                s.edges.push_back({i, it->second});
                ++s.degree[i];
                ++s.degree[it->second];
            }
    }
    return s;
}

// Floyd-Warshall over the skeleton vertices plus the two route endpoints.
double oracle_length(SkeletonPoint from, SkeletonPoint to) {
    const std::size_t n = kSkeletonVertexCount + 2;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    auto relax = [&](std::size_t u, std::size_t v, double w) {
        d[u][v] = std::min(d[u][v], w);
        d[v][u] = std::min(d[v][u], w);
    };
    for (const auto& e : kSkeletonEdges) relax(std::size_t(e.lo), std::size_t(e.hi), 2.0 * (e.s_hi - e.s_lo));
    const std::size_t f = kSkeletonVertexCount, t = kSkeletonVertexCount + 1;
    for (auto [p, id] : {std::pair{from, f}, std::pair{to, t}}) {
        const auto& e = edge_info(p.edge);
        relax(id, std::size_t(e.lo), 2.0 * (p.s - e.s_lo));
        relax(id, std::size_t(e.hi), 2.0 * (e.s_hi - p.s));
    }
    if (from.edge == to.edge) relax(f, t, 2.0 * std::abs(from.s - to.s));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d[f][t];
}

void expect_route_valid(const SkeletonRoute& r, SkeletonPoint to) {
    SkeletonPoint at = r.start;
    for (const auto& leg : r.legs) {
        ASSERT_LE(config_distance(L, embed(at), embed({leg.edge, leg.s_from})), 1e-12);
        for (int k = 0; k <= 20; ++k) {
            double s = leg.s_from + (leg.s_to - leg.s_from) * k / 20.0;
            ASSERT_NEAR(separation(L, embed({leg.edge, s})), 0.5, 1e-9);
        }
        at = {leg.edge, leg.s_to};
    }
    EXPECT_LE(config_distance(L, embed(at), embed(to)), 1e-12);
}

} // namespace

TEST(Skeleton, CountsAndBetti) {
    SkeletonGraph g = skeleton_build();
    EXPECT_EQ(g.vertex_count(), 6u);
    EXPECT_EQ(g.edge_count(), 8u);
    EXPECT_EQ(g.components(), 1u);
    EXPECT_EQ(g.betti1(), 3);
}

TEST(Skeleton, LatticeOracleAgrees) {
    LatticeSkeleton s = lattice_skeleton(64);
    std::size_t branch_points = 0, half_ends = 0;
    for (int d : s.degree) {
        ASSERT_GE(d, 1);
        if (d != 2) {
            ++branch_points;
            half_ends += static_cast<std::size_t>(d);
        }
    }
    EXPECT_EQ(branch_points, 6u);
    EXPECT_EQ(half_ends / 2, 8u);
    UnionFind uf(s.nodes.size());
    for (auto [u, v] : s.edges) uf.unite(u, v);
    EXPECT_EQ(uf.sets(), 1u);
    long b1 = static_cast<long>(s.edges.size()) - static_cast<long>(s.nodes.size()) + 1;
    EXPECT_EQ(b1, skeleton_build().betti1());
}

TEST(Skeleton, VertexEmbeddings) {
    EXPECT_EQ(vertex_state(SkelVertex::E1), (ConfigState{I(0.0), I(0.5)}));
    EXPECT_EQ(vertex_state(SkelVertex::V1), (ConfigState{I(0.5), C(0.0)}));
    EXPECT_EQ(vertex_state(SkelVertex::V2), (ConfigState{C(0.0), C(0.5)}));
    EXPECT_EQ(vertex_state(SkelVertex::V3), (ConfigState{C(0.5), C(0.0)}));
    EXPECT_EQ(vertex_state(SkelVertex::V4), (ConfigState{C(0.0), I(0.5)}));
    EXPECT_EQ(vertex_state(SkelVertex::E2), (ConfigState{I(0.5), I(0.0)}));
}

TEST(Skeleton, EdgesStayAtHalfUnit) {
    SkeletonGraph g = skeleton_build();
    for (const auto& e : g.edges()) {
        EXPECT_DOUBLE_EQ(e.length(), 1.0);
        for (const auto& x : g.sample_edge(e.id, 1000)) ASSERT_NEAR(separation(L, x), 0.5, 1e-12) << e.name;
    }
}

TEST(Skeleton, EdgeEndpointsAreTheirVertices) {
    for (const auto& e : kSkeletonEdges) {
        EXPECT_EQ(embed({e.id, e.s_lo}), vertex_state(e.lo)) << e.name;
        EXPECT_EQ(embed({e.id, e.s_hi}), vertex_state(e.hi)) << e.name;
    }
}

TEST(Skeleton, CounterclockwiseOrientation) {
    // S1: robot B's circle coordinate increases; S2: both increase; S3: robot A's increases
    const double h = 1e-3;
    for (const auto& e : kSkeletonEdges) {
        if (e.circle == 0) continue;
        double s = 0.5 * (e.s_lo + e.s_hi);
        ConfigState x = embed({e.id, s});
        ConfigState y = embed({e.id, s + e.ccw_sign * h});
        auto advance = [](PhysPoint p, PhysPoint q) { return wrap_half(q.t - p.t); };
        if (e.circle != 3) {
            EXPECT_GT(advance(x.b, y.b), 0.0) << e.name;
        }
        if (e.circle != 1) {
            EXPECT_GT(advance(x.a, y.a), 0.0) << e.name;
        }
    }
}

TEST(Locate, Examples) {
    auto p = skeleton_locate({I(0.75), C(0.25)}, 1e-9);
    EXPECT_EQ(p.edge, SkelEdge::S1a);
    EXPECT_NEAR(p.s, 0.75, 1e-15);
    auto q = skeleton_locate({C(0.25), C(0.75)}, 1e-9);
    EXPECT_EQ(q.edge, SkelEdge::S2a);
    EXPECT_NEAR(q.s, 0.25, 1e-15);
    try {
        skeleton_locate({I(0.2), I(0.3)}, 1e-6);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotOnSkeleton);
    }
}

TEST(Locate, RoundTrip) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 10000; ++i) {
        SkeletonPoint p = random_skeleton_point(rng);
        SkeletonPoint q = skeleton_locate(embed(p), 1e-9);
        ASSERT_LE(config_distance(L, embed(p), embed(q)), 1e-9);
        if (!vertex_of(p, 1e-9)) {
            ASSERT_EQ(p.edge, q.edge);
            ASSERT_NEAR(p.s, q.s, 1e-9);
        }
    }
}

TEST(Locate, NearbyStatesLandClose) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-1e-7, 1e-7);
    for (int i = 0; i < 2000; ++i) {
        ConfigState x = embed(random_skeleton_point(rng));
        ConfigState y = x;
        y.a = geodesic_point(L, x.a, C(0.25), std::abs(u(rng)));
        if (std::abs(separation(L, y) - 0.5) > 1e-6) continue;
        ASSERT_LE(config_distance(L, embed(skeleton_locate(y, 1e-6)), y), 4e-7);
    }
}

TEST(Route, IdentityIsEmpty) {
    SkeletonGraph g = skeleton_build();
    SkeletonPoint p{SkelEdge::S2a, 0.2};
    auto r = skeleton_route(g, p, p, RegionLabel::V3);
    EXPECT_TRUE(r.legs.empty());
    EXPECT_EQ(r.length(), 0.0);
    EXPECT_EQ(r.waypoints().size(), 1u);
}

TEST(Route, EndToEndCrossesEveryCircleCounterclockwise) {
    SkeletonGraph g = skeleton_build();
    auto r = skeleton_route(g, vertex_point(SkelVertex::E1), vertex_point(SkelVertex::E2), RegionLabel::V1);
    EXPECT_DOUBLE_EQ(r.length(), 5.0);
    EXPECT_EQ(r.signature(), "I1+ S1a+ S2a+ S3b- I2-");
    auto back = skeleton_route(g, vertex_point(SkelVertex::E2), vertex_point(SkelVertex::E1), RegionLabel::V1);
    EXPECT_DOUBLE_EQ(back.length(), 5.0);
    EXPECT_EQ(back.signature(), "I2+ S3a+ S2b+ S1b- I1-");
}

TEST(Route, SwapInCircleGoesCounterclockwise) {
    SkeletonGraph g = skeleton_build();
    SkeletonPoint from{SkelEdge::S2a, 0.2}, to{SkelEdge::S2b, 0.7};
    auto r = skeleton_route(g, from, to, RegionLabel::V2);
    EXPECT_NEAR(r.length(), 1.0, 1e-12);
    EXPECT_EQ(r.signature(), "S2a+ S2b+");
    expect_route_valid(r, to);
}

TEST(Route, V2NeedsACommonCircle) {
    SkeletonGraph g = skeleton_build();
    try {
        skeleton_route(g, {SkelEdge::S1a, 0.7}, {SkelEdge::S3a, 0.7}, RegionLabel::V2);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RegionMismatch);
    }
    EXPECT_THROW(skeleton_route(g, {SkelEdge::S1a, 0.7}, {SkelEdge::S1a, 0.8}, RegionLabel::CircleU), Error);
}

TEST(Route, V2AntipodesEveryCircle) {
    SkeletonGraph g = skeleton_build();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int c = 1; c <= 3; ++c) {
        for (int i = 0; i < 300; ++i) {
            double ell = u(rng);
            SkeletonPoint from = loop_point(c, ell);
            SkeletonPoint to = loop_point(c, ell + 1.0);
            auto r = skeleton_route(g, from, to, RegionLabel::V2);
            ASSERT_NEAR(r.length(), 1.0, 1e-9);
            for (const auto& leg : r.legs) {
                const auto& e = edge_info(leg.edge);
                ASSERT_EQ(e.circle, c);
                ASSERT_GE((leg.s_to - leg.s_from) * e.ccw_sign, 0.0);
            }
            expect_route_valid(r, to);
        }
    }
}

TEST(Route, ShortestMatchesFloydWarshall) {
    SkeletonGraph g = skeleton_build();
    std::mt19937_64 rng(24);
    for (int i = 0; i < 1000; ++i) {
        SkeletonPoint from = random_skeleton_point(rng), to = random_skeleton_point(rng);
        auto r = skeleton_route(g, from, to, RegionLabel::V3);
        ASSERT_NEAR(r.length(), oracle_length(from, to), 1e-9);
        ASSERT_LE(r.length(), 5.0 + 1e-12);
        expect_route_valid(r, to);
    }
}

TEST(Route, VertexToVertexTiesResolvedCounterclockwise) {
    SkeletonGraph g = skeleton_build();
    const std::array<SkelVertex, 6> all{SkelVertex::E1, SkelVertex::V1, SkelVertex::V2,
                                        SkelVertex::V3, SkelVertex::V4, SkelVertex::E2};
    for (SkelVertex a : all)
        for (SkelVertex b : all) {
            auto r = skeleton_route(g, vertex_point(a), vertex_point(b), RegionLabel::V1);
            for (const auto& leg : r.legs) {
                const auto& e = edge_info(leg.edge);
                if (e.circle != 0) {
                    EXPECT_GT((leg.s_to - leg.s_from) * e.ccw_sign, 0.0) << r.signature();
                }
            }
        }
}

TEST(Loop, CoordinatesAndAntipodes) {
    for (int c = 1; c <= 3; ++c) {
        for (double ell : {0.1, 0.5, 0.9, 1.3, 1.9}) {
            SkeletonPoint p = loop_point(c, ell);
            EXPECT_NEAR(loop_coordinate(p, c), ell, 1e-12);
            EXPECT_NEAR(loop_distance(p, antipode_in_circle(p, c), c), 1.0, 1e-12);
        }
    }
    // the antipode of a circle's vertex is its other vertex
    EXPECT_EQ(vertex_of(antipode_in_circle(vertex_point(SkelVertex::V2), 2)), SkelVertex::V3);
    EXPECT_EQ(vertex_of(antipode_in_circle(vertex_point(SkelVertex::V1), 1)), SkelVertex::V2);
}

TEST(ExtendedVertices, Membership) {
    EXPECT_TRUE(in_extended_vertices({SkelEdge::I1, 0.2}, 1e-6));
    EXPECT_TRUE(in_extended_vertices({SkelEdge::S2a, 0.0}, 1e-6));
    EXPECT_FALSE(in_extended_vertices({SkelEdge::S2a, 0.2}, 1e-6));
    EXPECT_EQ(interior_circle({SkelEdge::S3b, 0.7}, 1e-6), 3);
    EXPECT_EQ(interior_circle({SkelEdge::S3b, 1.0}, 1e-6), 0);
}
