#pragma once

// Brute-force checks of planner output: per-sample plan validation, sup
// distance between plans, seeded random queries and the continuity probe.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <random>
#include <string>
#include <vector>

#include "tcrobots/homology.hpp"
#include "tcrobots/planners.hpp"

namespace tcrobots {

enum class Violation { None, Endpoint, Collision, Skeleton, Speed, Coherence };

inline std::string_view to_string(Violation v) {
    switch (v) {
    case Violation::None: return "None";
    case Violation::Endpoint: return "EndpointViolation";
    case Violation::Collision: return "CollisionViolation";
    case Violation::Skeleton: return "SkeletonViolation";
    case Violation::Speed: return "SpeedViolation";
    case Violation::Coherence: return "CoherenceViolation";
    }
    return "?";
}

struct ValidationReport {
    Violation kind = Violation::None;
    double t = 0.0;
    std::string detail;

    bool ok() const { return kind == Violation::None; }
};

inline constexpr double kEndpointTol = 1e-6;
inline constexpr double kSeparationTol = 1e-6;
inline constexpr double kSpeedCap = 4.0;
inline constexpr double kMaxSampleGap = 0.25;

namespace detail {

inline double query_distance(const PlanQuery& q, const ConfigState& x, const ConfigState& y) {
    double d = dist(q.space, x.a, y.a);
    if (q.robots == 2) d += dist(q.space, x.b, y.b);
    return d;
}

inline ValidationReport violation(Violation kind, double t, std::string detail) {
    return {kind, t, std::move(detail)};
}

inline bool legal_state(const PlanQuery& q, const ConfigState& x) {
    try {
        if (!(canonicalize(q.space, x.a) == x.a)) return false;
        if (q.robots == 2 && !(canonicalize(q.space, x.b) == x.b)) return false;
    } catch (const Error&) {
        return false;
    }
    return true;
}

} // namespace detail

/// Checks a plan against its query and reports the first violation found.
inline ValidationReport validate_plan(const Plan& plan, const PlanQuery& query, const PlanParams& params = {}) {
    (void)params;
    const PlanQuery q = normalize(query);
    const auto poly = plan.polyline();
    if (poly.empty()) return detail::violation(Violation::Endpoint, 0.0, "plan has no samples");

    double e0 = detail::query_distance(q, poly.front().state, q.start);
    if (e0 > kEndpointTol) return detail::violation(Violation::Endpoint, poly.front().t, "start mismatch");
    double e1 = detail::query_distance(q, poly.back().state, q.goal);
    if (e1 > kEndpointTol) return detail::violation(Violation::Endpoint, poly.back().t, "goal mismatch");

    const bool two = q.robots == 2;
    const bool on_skeleton = two && q.space != SpaceKind::Interval;
    const double floor_sep =
        two ? std::min({separation(q.space, q.start), separation(q.space, q.goal), kHalfUnit}) - kSeparationTol : 0.0;

    const PlanSample* prev = nullptr;
    for (const auto& step : plan.steps) {
        for (const auto& s : step.samples) {
            if (!detail::legal_state(q, s.state))
                return detail::violation(Violation::Coherence, s.t, "illegal coordinate");
            if (two) {
                double sep = dist(q.space, s.state.a, s.state.b);
                if (sep < floor_sep) return detail::violation(Violation::Collision, s.t, "separation below bound");
                if (on_skeleton && step.tag == StepTag::Main && std::abs(sep - kHalfUnit) > kSeparationTol)
                    return detail::violation(Violation::Skeleton, s.t, "main step left the half-unit locus");
            }
            if (prev) {
                double dt = s.t - prev->t;
                if (dt < 0.0) return detail::violation(Violation::Coherence, s.t, "time decreases");
                double gap = dist(q.space, prev->state.a, s.state.a);
                if (two) gap = std::max(gap, dist(q.space, prev->state.b, s.state.b));
                if (gap > kMaxSampleGap) return detail::violation(Violation::Coherence, s.t, "samples too far apart");
                if (dt == 0.0 ? gap > 1e-9 : gap > (kSpeedCap + 1e-9) * dt)
                    return detail::violation(Violation::Speed, s.t, "speed above cap");
            }
            prev = &s;
        }
    }
    return {};
}

/// Sup over a uniform grid of normalized time of the L1 distance between two plans.
inline double plan_distance(const Plan& p, const Plan& q, std::size_t grid = 512) {
    const SpaceKind space = p.query.space;
    const auto lp = p.polyline();
    const auto lq = q.polyline();
    const double Tp = p.duration();
    const double Tq = q.duration();
    const bool two = p.query.robots == 2;
    double worst = 0.0;
    for (std::size_t k = 0; k <= grid; ++k) {
        double u = static_cast<double>(k) / static_cast<double>(grid);
        ConfigState x = state_at(space, lp, u * Tp);
        ConfigState y = state_at(space, lq, u * Tq);
        double d = dist(space, x.a, y.a) + (two ? dist(space, x.b, y.b) : 0.0);
        worst = std::max(worst, d);
    }
    return worst;
}

// ---- random queries ---------------------------------------------------------

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline PhysPoint random_point(SpaceKind space, std::mt19937_64& rng) {
    switch (space) {
    case SpaceKind::Interval: return {Edge::Interval, uniform(rng)};
    case SpaceKind::Circle: return {Edge::Circle, uniform(rng)};
    case SpaceKind::Lollipop: {
        double u = uniform(rng, 0.0, 2.0);
        return u < 1.0 ? PhysPoint{Edge::Interval, u} : canonicalize(space, PhysPoint{Edge::Circle, u - 1.0});
    }
    }
    return {};
}

inline ConfigState random_state(SpaceKind space, std::mt19937_64& rng) {
    for (;;) {
        ConfigState x{random_point(space, rng), random_point(space, rng)};
        if (dist(space, x.a, x.b) > 1e-9) return x;
    }
}

/// Moves p by exactly delta along the track toward a random point.
inline PhysPoint perturb_point(SpaceKind space, PhysPoint p, double delta, std::mt19937_64& rng) {
    if (delta <= 0.0) return p;
    for (;;) {
        PhysPoint q = random_point(space, rng);
        double d = dist(space, p, q);
        if (d > delta) return geodesic_point(space, p, q, delta / d);
    }
}

inline PlanQuery random_query(SpaceKind space, int robots, std::mt19937_64& rng) {
    PlanQuery q{space, robots, {}, {}};
    if (robots == 1) {
        PhysPoint s = random_point(space, rng), g = random_point(space, rng);
        q.start = {s, s};
        q.goal = {g, g};
        return q;
    }
    q.start = random_state(space, rng);
    q.goal = random_state(space, rng);
    if (space == SpaceKind::Interval && (q.start.a.t < q.start.b.t) != (q.goal.a.t < q.goal.b.t))
        std::swap(q.goal.a, q.goal.b);
    return q;
}

/// Random queries with a share drawn from the measure-zero domains (antipodal
/// goals) that uniform sampling would never hit.
inline PlanQuery suite_query(SpaceKind space, int robots, std::mt19937_64& rng, const PlanParams& params = {}) {
    PlanQuery q = random_query(space, robots, rng);
    if (space == SpaceKind::Interval || uniform(rng) >= 0.15) return q;

    if (space == SpaceKind::Circle) {
        if (robots == 1) {
            q.goal.a = q.goal.b = {Edge::Circle, wrap01(q.start.a.t + 0.5)};
            return q;
        }
        PhysPoint b = {Edge::Circle, wrap01(q.start.b.t + 0.5)};
        for (;;) {
            PhysPoint a = random_point(space, rng);
            if (dist(space, a, b) > 1e-9) {
                q.goal = {a, b};
                return q;
            }
        }
    }

    SkeletonPoint from = retract_lollipop(q.start, params.flow).skeleton_terminal.value();
    int c = interior_circle(from, params.tol_antipodal);
    if (c == 0) return q;
    if (c == 2 && uniform(rng) < 0.5) q.goal = swapped(q.start);
    else q.goal = embed(antipode_in_circle(from, c));
    return q;
}

// ---- continuity probe -------------------------------------------------------

struct ProbePair {
    PlanQuery base;
    PlanQuery perturbed;
};

using ProbeSampler = std::function<ProbePair(std::mt19937_64&, double)>;

struct RegionJumps {
    std::size_t compared = 0;
    double max_jump = 0.0;
    double mean_jump = 0.0;
};

struct JumpWitness {
    ProbePair pair;
    RegionLabel base_region;
    RegionLabel perturbed_region;
    std::string base_route;
    std::string perturbed_route;
    double jump;
};

struct ProbeResult {
    std::map<RegionLabel, RegionJumps> within;
    std::vector<JumpWitness> witnesses; ///< largest jumps across labels or routes
    std::size_t witness_count = 0;
    std::size_t skipped = 0;

    double max_jump() const {
        double m = 0.0;
        for (const auto& [r, j] : within) m = std::max(m, j.max_jump);
        return m;
    }
    double mean_jump() const {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& [r, j] : within) {
            sum += j.mean_jump * static_cast<double>(j.compared);
            n += j.compared;
        }
        return n ? sum / static_cast<double>(n) : 0.0;
    }
    double max_witness_jump() const { return witnesses.empty() ? 0.0 : witnesses.front().jump; }
};

inline constexpr std::size_t kKeptWitnesses = 16;

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Plans both queries of each sampled pair and compares them. Pairs with equal
/// label and route feed the per-region statistics; the others are witnesses.
inline ProbeResult continuity_probe(const ProbeSampler& sampler, double delta, std::size_t trials, std::uint64_t seed,
                                    const PlanParams& params = {}) {
    if (delta < 0.0) throw Error(ErrorCode::InvalidArgument, "delta must be nonnegative");
    ProbeResult out;
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        ProbePair pair = sampler(rng, delta);
        Plan p1, p2;
        try {
            p1 = plan(pair.base, params);
            p2 = plan(pair.perturbed, params);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SwapImpossible) throw;
            ++out.skipped;
            continue;
        }
        double jump = plan_distance(p1, p2);
        if (p1.region == p2.region && p1.route == p2.route) {
            RegionJumps& r = out.within[p1.region];
            ++r.compared;
            r.max_jump = std::max(r.max_jump, jump);
            r.mean_jump += (jump - r.mean_jump) / static_cast<double>(r.compared);
        } else {
            ++out.witness_count;
            out.witnesses.push_back({pair, p1.region, p2.region, p1.route, p2.route, jump});
            std::stable_sort(out.witnesses.begin(), out.witnesses.end(),
                             [](const JumpWitness& x, const JumpWitness& y) { return x.jump > y.jump; });
            if (out.witnesses.size() > kKeptWitnesses) out.witnesses.pop_back();
        }
    }
    return out;
}

namespace detail {

/// True when moving a robot from p to q along the track meets (or nearly
/// meets) the other robot, i.e. the pair straddles the removed diagonal.
inline bool passes_through(SpaceKind space, PhysPoint p, PhysPoint q, PhysPoint other) {
    return dist(space, p, other) + dist(space, other, q) <= dist(space, p, q) + 1e-12 ||
           dist(space, q, other) <= 1e-9;
}

} // namespace detail

/// Random query with one coordinate moved by delta, never pushing a robot
/// through the other one.
inline ProbeSampler uniform_pair_sampler(SpaceKind space, int robots) {
    return [space, robots](std::mt19937_64& rng, double delta) {
        for (;;) {
            PlanQuery base = random_query(space, robots, rng);
            PlanQuery moved = base;
            int slot = std::uniform_int_distribution<int>(0, 2 * robots - 1)(rng);
            ConfigState& x = slot < robots ? moved.start : moved.goal;
            const bool first = slot % robots == 0;
            PhysPoint& p = first ? x.a : x.b;
            PhysPoint from = p;
            p = perturb_point(space, p, delta, rng);
            if (robots == 1) x.b = x.a;
            else if (detail::passes_through(space, from, p, first ? x.b : x.a)) continue;
            return ProbePair{base, moved};
        }
    };
}

namespace detail {

inline PhysPoint random_away_from(SpaceKind space, PhysPoint avoid, double gap, std::mt19937_64& rng) {
    for (;;) {
        PhysPoint p = random_point(space, rng);
        if (dist(space, p, avoid) > gap) return p;
    }
}

} // namespace detail

/// Circle queries whose goal B sits exactly antipodal to start B, paired with
/// a goal nudged off the antipode.
inline ProbeSampler circle_boundary_sampler(int robots) {
    return [robots](std::mt19937_64& rng, double delta) {
        const SpaceKind C = SpaceKind::Circle;
        double side = uniform(rng) < 0.5 ? -1.0 : 1.0;
        PhysPoint sb = random_point(C, rng);
        PhysPoint gb{Edge::Circle, wrap01(sb.t + 0.5)};
        PhysPoint gb_moved{Edge::Circle, wrap01(gb.t + side * delta)};
        if (robots == 1) return ProbePair{{C, 1, {sb, sb}, {gb, gb}}, {C, 1, {sb, sb}, {gb_moved, gb_moved}}};
        PhysPoint sa = detail::random_away_from(C, sb, 1e-3, rng);
        PhysPoint ga = detail::random_away_from(C, gb, 2e-3 + delta, rng);
        return ProbePair{{C, 2, {sa, sb}, {ga, gb}}, {C, 2, {sa, sb}, {ga, gb_moved}}};
    };
}

/// Pairs of antipodal-goal circle queries, both rotated together so they stay antipodal.
inline ProbeSampler circle_u_within_sampler(int robots) {
    return [robots](std::mt19937_64& rng, double delta) {
        const SpaceKind C = SpaceKind::Circle;
        const double eps = delta / 2.0;
        PhysPoint sb = random_point(C, rng);
        PhysPoint gb{Edge::Circle, wrap01(sb.t + 0.5)};
        PhysPoint sb2{Edge::Circle, wrap01(sb.t + eps)};
        PhysPoint gb2{Edge::Circle, wrap01(gb.t + eps)};
        if (robots == 1) return ProbePair{{C, 1, {sb, sb}, {gb, gb}}, {C, 1, {sb2, sb2}, {gb2, gb2}}};
        PhysPoint sa = detail::random_away_from(C, sb, 2e-3 + eps, rng);
        PhysPoint ga = detail::random_away_from(C, gb, 2e-3 + eps, rng);
        return ProbePair{{C, 2, {sa, sb}, {ga, gb}}, {C, 2, {sa, sb2}, {ga, gb2}}};
    };
}

namespace detail {

inline double random_loop_coordinate(std::mt19937_64& rng) {
    // stay clear of the circle's two vertices at loop coordinates 0 and 1
    double u = uniform(rng, 0.1, 0.9);
    return uniform(rng) < 0.5 ? u : u + 1.0;
}

} // namespace detail

/// Lollipop queries already on a skeleton circle with antipodal goal (V2),
/// paired with a goal nudged along the loop (V3).
inline ProbeSampler lollipop_boundary_sampler() {
    return [](std::mt19937_64& rng, double delta) {
        int c = std::uniform_int_distribution<int>(1, 3)(rng);
        double l = detail::random_loop_coordinate(rng);
        double side = uniform(rng) < 0.5 ? -1.0 : 1.0;
        ConfigState start = embed(loop_point(c, l));
        ConfigState goal = embed(loop_point(c, l + 1.0));
        ConfigState moved = embed(loop_point(c, l + 1.0 + side * delta));
        const SpaceKind L = SpaceKind::Lollipop;
        return ProbePair{{L, 2, start, goal}, {L, 2, start, moved}};
    };
}

/// Two V2 queries shifted together along the loop.
inline ProbeSampler lollipop_v2_within_sampler() {
    return [](std::mt19937_64& rng, double delta) {
        int c = std::uniform_int_distribution<int>(1, 3)(rng);
        double l = detail::random_loop_coordinate(rng);
        const double eps = delta / 2.0;
        const SpaceKind L = SpaceKind::Lollipop;
        return ProbePair{{L, 2, embed(loop_point(c, l)), embed(loop_point(c, l + 1.0))},
                         {L, 2, embed(loop_point(c, l + eps)), embed(loop_point(c, l + 1.0 + eps))}};
    };
}

// ---- retraction continuity --------------------------------------------------

struct JumpStats {
    std::size_t trials = 0;
    double max = 0.0;
    double mean = 0.0;
};

/// Terminal L1 distance between retractions of random states and their delta-perturbations.
inline JumpStats retraction_continuity(std::size_t trials, double delta, std::uint64_t seed,
                                       const FlowParams& params = {}) {
    const SpaceKind L = SpaceKind::Lollipop;
    JumpStats out;
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        ConfigState x = random_state(L, rng);
        ConfigState y = x;
        const bool first = uniform(rng) < 0.5;
        PhysPoint& p = first ? y.a : y.b;
        const PhysPoint other = first ? y.b : y.a;
        for (;;) {
            PhysPoint moved = perturb_point(L, p, delta, rng);
            if (!detail::passes_through(L, p, moved, other)) {
                p = moved;
                break;
            }
        }
        ConfigState tx = embed(retract_lollipop(x, params).skeleton_terminal.value());
        ConfigState ty = embed(retract_lollipop(y, params).skeleton_terminal.value());
        double d = config_distance(L, tx, ty);
        ++out.trials;
        out.max = std::max(out.max, d);
        out.mean += (d - out.mean) / static_cast<double>(out.trials);
    }
    return out;
}

// ---- discrete oracle vs planner ---------------------------------------------

inline ConfigState node_state(const DiscreteConfigComplex& c, NodePair p) {
    return {c.graph.points.at(static_cast<std::size_t>(p.first)), c.graph.points.at(static_cast<std::size_t>(p.second))};
}

/// Counts random node-pair queries where discrete reachability and planner
/// success disagree.
inline std::size_t oracle_disagreements(SpaceKind space, int n, std::size_t trials, std::uint64_t seed,
                                        const PlanParams& params = {}) {
    DiscreteConfigComplex c = discretize(space, n, 2);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        std::uniform_int_distribution<std::size_t> pick(0, c.V() - 1);
        NodePair s = c.nodes[pick(rng)];
        NodePair g = c.nodes[pick(rng)];
        bool reachable = oracle_path(c, s, g).has_value();
        bool planned = true;
        try {
            Plan p = plan({space, 2, node_state(c, s), node_state(c, g)}, params);
            planned = validate_plan(p, p.query, params).ok();
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SwapImpossible) throw;
            planned = false;
        }
        if (reachable != planned) ++bad;
    }
    return bad;
}

// ---- junction families ------------------------------------------------------

struct FamilyCheck {
    std::string name;
    SkelVertex vertex;
    double worst = 0.0; ///< largest terminal L1 distance to the vertex over the family grid
};

/// States within eps of a skeleton vertex whose junction robot is approached
/// along each of the three branches. Terminals should land near the vertex.
inline std::vector<FamilyCheck> junction_families(double eps, const FlowParams& params = {}) {
    const SpaceKind L = SpaceKind::Lollipop;
    const PhysPoint branches[3] = {{Edge::Interval, 1.0 - eps}, {Edge::Circle, eps}, {Edge::Circle, 1.0 - eps}};
    const char* branch_names[3] = {"stick", "ccw", "cw"};
    auto distance_to = [&](const ConfigState& x, SkelVertex v) {
        return config_distance(L, embed(retract_lollipop(x, params).skeleton_terminal.value()), vertex_state(v));
    };

    std::vector<FamilyCheck> out;
    // v1: A on the stick in (1/2, 1), B at the junction; v4 is the same with robots exchanged
    for (bool exchanged : {false, true}) {
        SkelVertex v = exchanged ? SkelVertex::V4 : SkelVertex::V1;
        for (int k = 0; k < 3; ++k) {
            FamilyCheck f{std::string(to_string(v)) + "/" + branch_names[k], v, 0.0};
            for (int i = 0; i <= 7; ++i) {
                ConfigState x{{Edge::Interval, 0.55 + 0.05 * i}, branches[k]};
                f.worst = std::max(f.worst, distance_to(exchanged ? swapped(x) : x, v));
            }
            out.push_back(f);
        }
    }
    // v2: A at the junction, B on the circle away from the junction and the pole; v3 exchanged
    for (bool exchanged : {false, true}) {
        SkelVertex v = exchanged ? SkelVertex::V3 : SkelVertex::V2;
        for (int k = 0; k < 3; ++k) {
            FamilyCheck f{std::string(to_string(v)) + "/" + branch_names[k], v, 0.0};
            for (int i = 0; i <= 7; ++i) {
                for (double b : {0.1 + 0.05 * i, 0.55 + 0.05 * i}) {
                    ConfigState x{branches[k], {Edge::Circle, b}};
                    f.worst = std::max(f.worst, distance_to(exchanged ? swapped(x) : x, v));
                }
            }
            out.push_back(f);
        }
    }
    return out;
}

// ---- plan suite -------------------------------------------------------------

struct PlanSuiteResult {
    SpaceKind space = SpaceKind::Lollipop;
    int robots = 2;
    std::size_t trials = 0;
    std::size_t violations = 0;
    std::vector<std::string> failures; ///< first few violation descriptions
    std::set<RegionLabel> regions;
};

inline PlanSuiteResult plan_suite(SpaceKind space, int robots, std::size_t trials, std::uint64_t seed,
                                  const PlanParams& params = {}) {
    PlanSuiteResult out{space, robots, trials, 0, {}, {}};
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        PlanQuery q = suite_query(space, robots, rng, params);
        Plan p = plan(q, params);
        out.regions.insert(p.region);
        ValidationReport r = validate_plan(p, q, params);
        if (r.ok()) continue;
        ++out.violations;
        if (out.failures.size() < 5)
            out.failures.push_back(std::string(to_string(r.kind)) + " at t=" + std::to_string(r.t) + " (" + r.detail +
                                   ") start " + encode_point(q.start.a) + "," + encode_point(q.start.b) + " goal " +
                                   encode_point(q.goal.a) + "," + encode_point(q.goal.b));
    }
    return out;
}

/// Counts interval swap queries that the planner wrongly accepts.
inline std::size_t swap_acceptances(std::size_t trials, std::uint64_t seed, const PlanParams& params = {}) {
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(trial_seed(seed, i));
        ConfigState s = random_state(SpaceKind::Interval, rng);
        ConfigState g = random_state(SpaceKind::Interval, rng);
        if ((s.a.t < s.b.t) == (g.a.t < g.b.t)) g = swapped(g);
        try {
            plan({SpaceKind::Interval, 2, s, g}, params);
            ++accepted;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SwapImpossible) throw;
        }
    }
    return accepted;
}

} // namespace tcrobots
