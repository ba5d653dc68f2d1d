#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tcrobots/retraction.hpp"
#include "tcrobots/verify.hpp"

using namespace tcrobots;

namespace {

const SpaceKind L = SpaceKind::Lollipop;

PhysPoint I(double t) { return {Edge::Interval, t}; }
PhysPoint C(double t) { return {Edge::Circle, t}; }

// Brute-force flow for separation below 1/2: explicit Euler in time with the
// direction re-read every step, speed min(1, kappa * distance-to-junction).
ConfigState euler_terminal(ConfigState x, double kappa, double h) {
    for (int iter = 0; iter < 10000000; ++iter) {
        double sep = separation(L, x);
        if (sep >= 0.5 - 1e-9) return x;
        ConfigState next = x;
        for (int r = 0; r < 2; ++r) {
            PhysPoint& p = r == 0 ? next.a : next.b;
            const PhysPoint& self = r == 0 ? x.a : x.b;
            const PhysPoint& other = r == 0 ? x.b : x.a;
            auto dir = away_direction(L, self, other);
            if (!dir || *dir == Direction::Parked) continue;
            double speed = std::min(1.0, kappa * dist_to_junction(self));
            double step = std::min(speed * h, 0.5 * (0.5 - sep)); // both may move
            p = move_along(L, self, *dir, step, true);
        }
        x = next;
    }
    ADD_FAILURE() << "oracle did not converge";
    return x;
}

ConfigState random_low_separation(std::mt19937_64& rng) {
    for (;;) {
        ConfigState x = random_state(L, rng);
        double s = separation(L, x);
        if (s > 1e-3 && s < 0.5 - 1e-3) return x;
    }
}

ConfigState random_high_separation(std::mt19937_64& rng) {
    for (;;) {
        ConfigState x = random_state(L, rng);
        if (separation(L, x) > 0.5 + 1e-3) return x;
    }
}

} // namespace

TEST(RetractCircle, Examples) {
    FlowPath p = retract_circle({C(0.0), C(0.3)});
    EXPECT_NEAR(p.back().a.t, 0.8, 1e-12);
    EXPECT_EQ(p.back().b, C(0.3));
    EXPECT_LT(p.samples[1].state.a.t, 1.0);
    EXPECT_GT(p.samples[1].state.a.t, 0.8); // clockwise from 0

    FlowPath q = retract_circle({C(0.25), C(0.75)});
    EXPECT_EQ(q.samples.size(), 2u);
    EXPECT_EQ(q.front(), q.back());

    FlowPath r = retract_circle({C(0.6), C(0.5)});
    EXPECT_NEAR(dist(SpaceKind::Circle, r.back().a, C(0.0)), 0.0, 1e-12);
    EXPECT_GT(r.samples[1].state.a.t, 0.6); // counterclockwise
}

TEST(RetractCircle, Properties) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 2000; ++i) {
        ConfigState x = random_state(SpaceKind::Circle, rng);
        FlowPath p = retract_circle(x);
        EXPECT_EQ(p.front(), x);
        EXPECT_NEAR(separation(SpaceKind::Circle, p.back()), 0.5, 1e-12);
        EXPECT_NEAR(p.back().a.t, wrap01(x.b.t + 0.5), 1e-12);
        double prev = separation(SpaceKind::Circle, x);
        for (const auto& s : p.samples) {
            ASSERT_EQ(s.state.b.t, x.b.t);
            double sep = separation(SpaceKind::Circle, s.state);
            ASSERT_GE(sep, prev - 1e-12);
            prev = sep;
        }
    }
}

TEST(RetractLollipop, AboveHalfMovesOnlyTheStickRobot) {
    FlowPath p = retract_lollipop({I(0.2), C(0.25)});
    EXPECT_NEAR(p.back().a.t, 0.75, 1e-12);
    EXPECT_EQ(p.back().b, C(0.25));
    ASSERT_TRUE(p.skeleton_terminal);
    EXPECT_EQ(p.skeleton_terminal->edge, SkelEdge::S1a);
}

TEST(RetractLollipop, AboveHalfClosedForm) {
    // A = I:x, B = C:c with separation above 1/2: A stops at 1/2 + min(c, 1 - c)
    std::mt19937_64 rng(103);
    for (int i = 0; i < 2000; ++i) {
        double c = uniform(rng);
        double stop = 0.5 + std::min(c, 1.0 - c);
        double x = uniform(rng, 0.0, stop - 1e-3);
        FlowPath p = retract_lollipop({I(x), C(c)});
        PhysPoint expect = canonicalize(L, I(stop));
        ASSERT_NEAR(dist(L, p.back().a, expect), 0.0, 1e-9) << x << " " << c;
        ASSERT_EQ(p.back().b, canonicalize(L, C(c)));
    }
}

TEST(RetractLollipop, JunctionRobotParks) {
    FlowPath p = retract_lollipop({I(0.9), C(0.0)});
    EXPECT_NEAR(p.back().a.t, 0.5, 1e-9);
    for (const auto& s : p.samples) ASSERT_EQ(s.state.b, C(0.0));
    ASSERT_TRUE(p.skeleton_terminal);
    EXPECT_EQ(vertex_of(*p.skeleton_terminal, 1e-9), SkelVertex::V1);
}

TEST(RetractLollipop, SymmetricSplit) {
    // equal full speeds, so each robot covers half of the missing 0.4
    FlowPath p = retract_lollipop({C(0.45), C(0.55)});
    EXPECT_NEAR(p.back().a.t, 0.25, 1e-9);
    EXPECT_NEAR(p.back().b.t, 0.75, 1e-9);
    ASSERT_TRUE(p.skeleton_terminal);
    EXPECT_EQ(p.skeleton_terminal->edge, SkelEdge::S2a);
}

TEST(RetractLollipop, AtHalfIsConstant) {
    ConfigState x{I(0.75), C(0.25)};
    FlowPath p = retract_lollipop(x);
    EXPECT_EQ(p.samples.size(), 2u);
    EXPECT_EQ(p.front(), x);
    EXPECT_EQ(p.back(), x);
}

TEST(RetractLollipop, AgreesWithEulerOracle) {
    std::mt19937_64 rng(107);
    for (int i = 0; i < 300; ++i) {
        ConfigState x = random_low_separation(rng);
        ConfigState expect = euler_terminal(x, 4.0, 1e-5);
        FlowPath p = retract_lollipop(x);
        ASSERT_LE(config_distance(L, p.back(), expect), 2e-3)
            << encode_point(x.a) << "," << encode_point(x.b) << " vs " << encode_point(expect.a) << ","
            << encode_point(expect.b);
    }
}

TEST(RetractLollipop, TerminalOnSkeleton) {
    std::mt19937_64 rng(109);
    for (int i = 0; i < 10000; ++i) {
        ConfigState x = random_state(L, rng);
        FlowPath p = retract_lollipop(x);
        ASSERT_EQ(p.front(), x);
        ASSERT_NEAR(separation(L, p.back()), 0.5, 1e-6);
        ASSERT_TRUE(p.skeleton_terminal);
        ASSERT_LE(config_distance(L, embed(*p.skeleton_terminal), p.back()), 1e-6);
        ASSERT_EQ(p.samples.front().time, 0.0);
        ASSERT_EQ(p.samples.back().time, 1.0);
    }
}

TEST(RetractLollipop, SeparationMonotoneAndCollisionFree) {
    std::mt19937_64 rng(113);
    for (int i = 0; i < 3000; ++i) {
        ConfigState x = random_state(L, rng);
        double s0 = separation(L, x);
        FlowPath p = retract_lollipop(x);
        double prev = s0;
        double floor = std::min(s0, 0.5) - 1e-6;
        for (const auto& s : p.samples) {
            double sep = separation(L, s.state);
            ASSERT_GE(sep, floor);
            if (s0 < 0.5) {
                ASSERT_GE(sep, prev - 1e-12);
            } else {
                ASSERT_LE(sep, prev + 1e-12);
            }
            prev = sep;
        }
    }
}

TEST(RetractLollipop, NonMoverIsBitwiseStationary) {
    std::mt19937_64 rng(127);
    for (int i = 0; i < 2000; ++i) {
        ConfigState x = random_high_separation(rng);
        FlowPath p = retract_lollipop(x);
        auto from_free_end = [](PhysPoint q) { return q.edge == Edge::Interval ? q.t : 1.0 + std::min(q.t, 1.0 - q.t); };
        bool a_moves = from_free_end(x.a) < from_free_end(x.b);
        for (const auto& s : p.samples) {
            if (a_moves) {
                ASSERT_EQ(s.state.b, x.b);
            } else {
                ASSERT_EQ(s.state.a, x.a);
            }
        }
    }
}

TEST(Reverse, Involution) {
    std::mt19937_64 rng(131);
    for (int i = 0; i < 200; ++i) {
        FlowPath p = retract_lollipop(random_state(L, rng));
        FlowPath rr = reverse(reverse(p));
        ASSERT_EQ(rr.samples.size(), p.samples.size());
        for (std::size_t k = 0; k < p.samples.size(); ++k) {
            ASSERT_EQ(rr.samples[k].time, p.samples[k].time);
            ASSERT_EQ(rr.samples[k].state, p.samples[k].state);
        }
    }
    FlowPath r = reverse(retract_lollipop({I(0.2), C(0.25)}));
    EXPECT_NEAR(r.front().a.t, 0.75, 1e-12);
    EXPECT_EQ(r.back(), (ConfigState{I(0.2), C(0.25)}));
    FlowPath c = detail::constant_flow({I(0.75), C(0.25)});
    EXPECT_EQ(reverse(c).front(), c.front());
}

TEST(RetractLollipop, TerminalContinuity) {
    JumpStats s = retraction_continuity(1000, 1e-4, 42);
    EXPECT_EQ(s.trials, 1000u);
    EXPECT_LE(s.max, 0.05);
    EXPECT_LE(s.mean, 10 * 1e-4);
}

TEST(RetractLollipop, JunctionFamiliesConverge) {
    auto families = junction_families(1e-3);
    EXPECT_EQ(families.size(), 12u);
    for (const auto& f : families) EXPECT_LE(f.worst, 0.02) << f.name;
}

TEST(RetractLollipop, RejectsBadParameters) {
    FlowParams p;
    p.kappa = 0.0;
    EXPECT_THROW(retract_lollipop({I(0.2), C(0.25)}, p), Error);
}
