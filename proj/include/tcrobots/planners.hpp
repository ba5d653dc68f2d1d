#pragma once

// Motion planners for one robot on the interval or circle and two robots on
// the interval, circle and lollipop. Each plan is a sampled path in
// configuration space split into Preliminary / Main / Final steps and tagged
// with the continuity domain that produced it.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "tcrobots/config.hpp"
#include "tcrobots/retraction.hpp"
#include "tcrobots/skeleton.hpp"

namespace tcrobots {

/// For single-robot queries only `a` is meaningful; `b` mirrors `a`.
struct PlanQuery {
    SpaceKind space = SpaceKind::Lollipop;
    int robots = 2;
    ConfigState start;
    ConfigState goal;
};

enum class StepTag { Preliminary, Main, Final };

inline std::string_view to_string(StepTag t) {
    switch (t) {
    case StepTag::Preliminary: return "preliminary";
    case StepTag::Main: return "main";
    case StepTag::Final: return "final";
    }
    return "?";
}

inline StepTag parse_step_tag(std::string_view s) {
    if (s == "preliminary") return StepTag::Preliminary;
    if (s == "main") return StepTag::Main;
    if (s == "final") return StepTag::Final;
    throw Error(ErrorCode::ParseError, "unknown step tag '" + std::string(s) + "'");
}

struct PlanSample {
    double t;
    ConfigState state;
};

struct PlanStep {
    StepTag tag;
    std::vector<PlanSample> samples;
};

struct Plan {
    PlanQuery query;
    RegionLabel region = RegionLabel::Whole;
    std::string route; ///< which way the main step went; equal routes are comparable for continuity
    std::vector<PlanStep> steps;

    std::vector<PlanSample> polyline() const {
        std::vector<PlanSample> out;
        for (const auto& step : steps) out.insert(out.end(), step.samples.begin(), step.samples.end());
        return out;
    }

    double duration() const { return steps.empty() ? 0.0 : steps.back().samples.back().t; }
};

struct PlanParams {
    FlowParams flow;
    double tol_antipodal = 1e-6;
};

inline PlanQuery normalize(const PlanQuery& q) {
    if (q.robots != 1 && q.robots != 2) throw Error(ErrorCode::UnsupportedQuery, "only one or two robots");
    if (q.robots == 1 && q.space == SpaceKind::Lollipop)
        throw Error(ErrorCode::UnsupportedQuery, "single-robot lollipop planning is not provided");
    PlanQuery n = q;
    if (q.robots == 1) {
        n.start.a = n.start.b = canonicalize(q.space, q.start.a);
        n.goal.a = n.goal.b = canonicalize(q.space, q.goal.a);
        return n;
    }
    n.start = canonicalize(q.space, q.start);
    n.goal = canonicalize(q.space, q.goal);
    return n;
}

/// Continuity domain of a pair of skeleton points.
inline RegionLabel classify_terminals(SkeletonPoint from, SkeletonPoint to, double tol) {
    if (in_extended_vertices(from, tol) && in_extended_vertices(to, tol)) return RegionLabel::V1;
    int c = interior_circle(from, tol);
    if (c != 0 && c == interior_circle(to, tol) && std::abs(loop_distance(from, to, c) - 1.0) <= tol)
        return RegionLabel::V2;
    return RegionLabel::V3;
}

inline RegionLabel classify(const PlanQuery& query, const PlanParams& params = {}) {
    PlanQuery q = normalize(query);
    switch (q.space) {
    case SpaceKind::Interval: return RegionLabel::Whole;
    case SpaceKind::Circle: {
        const PhysPoint& from = q.robots == 1 ? q.start.a : q.start.b;
        const PhysPoint& to = q.robots == 1 ? q.goal.a : q.goal.b;
        return is_generalized_antipodal(SpaceKind::Circle, from, to, params.tol_antipodal) ? RegionLabel::CircleU
                                                                                           : RegionLabel::CircleV;
    }
    case SpaceKind::Lollipop: {
        auto from = retract_lollipop(q.start, params.flow).skeleton_terminal.value();
        auto to = retract_lollipop(q.goal, params.flow).skeleton_terminal.value();
        return classify_terminals(from, to, params.tol_antipodal);
    }
    }
    return RegionLabel::Whole;
}

inline std::string instruction_text(RegionLabel region, SpaceKind space, int robots = 2) {
    switch (region) {
    case RegionLabel::Whole: return "move in a straight line";
    case RegionLabel::CircleU:
        if (robots == 1 || space != SpaceKind::Circle) return "go counterclockwise";
        return "move both robots counterclockwise until B reaches its goal";
    case RegionLabel::CircleV:
        if (robots == 1 || space != SpaceKind::Circle) return "go following the shortest path";
        return "move both robots the same way along B's shortest arc until B reaches its goal";
    case RegionLabel::V1:
        return "robots in vertex position: take the shortest path when in the same order, otherwise go around "
               "the circle counterclockwise";
    case RegionLabel::V2:
        return "move whichever robot is in the circle counterclockwise to its final destination; the other keeps "
               "half-unit distance";
    case RegionLabel::V3:
        return "move both robots along shortest paths, counterclockwise whenever in the circle";
    }
    return "";
}

namespace detail {

/// Stamps step k over [k, k+1], spacing samples by the larger robot displacement.
inline PlanStep timed_step(StepTag tag, const std::vector<ConfigState>& states, double k, const PlanQuery& q) {
    std::vector<double> cum(states.size(), 0.0);
    for (std::size_t i = 1; i < states.size(); ++i) {
        double da = dist(q.space, states[i - 1].a, states[i].a);
        double db = q.robots == 2 ? dist(q.space, states[i - 1].b, states[i].b) : 0.0;
        cum[i] = cum[i - 1] + std::max(da, db);
    }
    const double total = cum.empty() ? 0.0 : cum.back();
    PlanStep step{tag, {}};
    step.samples.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        double frac = total > 0.0 ? cum[i] / total
                                  : (states.size() > 1 ? static_cast<double>(i) / (states.size() - 1) : 0.0);
        step.samples.push_back({i + 1 == states.size() ? k + 1.0 : k + frac, states[i]});
    }
    return step;
}

inline std::vector<ConfigState> flow_states(const FlowPath& path) {
    std::vector<ConfigState> out;
    out.reserve(path.samples.size());
    for (const auto& s : path.samples) out.push_back(s.state);
    return out;
}

inline std::vector<ConfigState> at_least_two(std::vector<ConfigState> states) {
    if (states.size() == 1) states.push_back(states.front());
    return states;
}

inline std::string rotation_name(double delta) { return delta > 0.0 ? "ccw" : (delta < 0.0 ? "cw" : "none"); }

inline Plan plan_interval(const PlanQuery& q, const PlanParams& params) {
    if (q.robots == 2) {
        bool start_order = q.start.a.t < q.start.b.t;
        bool goal_order = q.goal.a.t < q.goal.b.t;
        if (start_order != goal_order)
            throw Error(ErrorCode::SwapImpossible, "robots cannot swap places on the interval");
    }
    double da = q.goal.a.t - q.start.a.t;
    double db = q.goal.b.t - q.start.b.t;
    std::size_t n = segments_for(std::max(std::abs(da), std::abs(db)), params.flow.step);
    std::vector<ConfigState> states;
    states.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double lambda = static_cast<double>(k) / static_cast<double>(n);
        if (k == 0) states.push_back(q.start);
        else if (k == n) states.push_back(q.goal);
        else states.push_back({{Edge::Interval, q.start.a.t + lambda * da}, {Edge::Interval, q.start.b.t + lambda * db}});
    }
    return Plan{q, RegionLabel::Whole, "line", {timed_step(StepTag::Main, states, 0.0, q)}};
}

/// Rigid rotation of both robots (or the one robot) by delta.
inline std::vector<ConfigState> rotation_states(const ConfigState& from, const ConfigState& to, double delta,
                                                double step) {
    std::size_t n = segments_for(std::abs(delta), step);
    std::vector<ConfigState> states;
    states.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double lambda = static_cast<double>(k) / static_cast<double>(n);
        if (k == 0) states.push_back(from);
        else if (k == n) states.push_back(to);
        else
            states.push_back({{Edge::Circle, wrap01(from.a.t + lambda * delta)},
                              {Edge::Circle, wrap01(from.b.t + lambda * delta)}});
    }
    return states;
}

inline Plan plan_circle(const PlanQuery& q, const PlanParams& params) {
    RegionLabel region = classify(q, params);
    const PhysPoint& from = q.robots == 1 ? q.start.a : q.start.b;
    const PhysPoint& to = q.robots == 1 ? q.goal.a : q.goal.b;
    double delta = region == RegionLabel::CircleU ? wrap01(to.t - from.t) : wrap_half(to.t - from.t);

    if (q.robots == 1) {
        auto states = rotation_states(q.start, q.goal, delta, params.flow.step);
        return Plan{q, region, rotation_name(delta), {timed_step(StepTag::Main, states, 0.0, q)}};
    }

    FlowPath pre = retract_circle(q.start, params.flow);
    FlowPath post = reverse(retract_circle(q.goal, params.flow));
    auto main = rotation_states(pre.back(), post.front(), delta, params.flow.step);
    return Plan{q,
                region,
                rotation_name(delta),
                {timed_step(StepTag::Preliminary, flow_states(pre), 0.0, q),
                 timed_step(StepTag::Main, main, 1.0, q),
                 timed_step(StepTag::Final, flow_states(post), 2.0, q)}};
}

inline std::vector<ConfigState> route_states(const SkeletonRoute& route, double step) {
    std::vector<ConfigState> states{embed(route.start)};
    for (const auto& leg : route.legs) {
        std::size_t n = segments_for(std::abs(leg.s_to - leg.s_from), step);
        for (std::size_t k = 1; k <= n; ++k) {
            double s = k == n ? leg.s_to
                              : leg.s_from + (leg.s_to - leg.s_from) * static_cast<double>(k) / static_cast<double>(n);
            states.push_back(embed({leg.edge, s}));
        }
    }
    return at_least_two(std::move(states));
}

inline Plan plan_lollipop(const PlanQuery& q, const PlanParams& params) {
    FlowPath pre = retract_lollipop(q.start, params.flow);
    FlowPath post = reverse(retract_lollipop(q.goal, params.flow));
    SkeletonPoint from = pre.skeleton_terminal.value();
    SkeletonPoint to = post.skeleton_terminal.value();
    RegionLabel region = classify_terminals(from, to, params.tol_antipodal);
    SkeletonRoute route = skeleton_route(skeleton_build(), from, to, region);

    auto main = route_states(route, params.flow.step);
    // the route starts and ends on the snapped terminals; pin them to the flow samples
    main.front() = pre.back();
    main.back() = post.front();
    return Plan{q,
                region,
                route.signature(),
                {timed_step(StepTag::Preliminary, flow_states(pre), 0.0, q),
                 timed_step(StepTag::Main, main, 1.0, q),
                 timed_step(StepTag::Final, flow_states(post), 2.0, q)}};
}

} // namespace detail

/// Plans a path from query.start to query.goal.
///
/// Throws SwapImpossible for two robots on the interval whose order differs
/// between start and goal.
inline Plan plan(const PlanQuery& query, const PlanParams& params = {}) {
    PlanQuery q = normalize(query);
    switch (q.space) {
    case SpaceKind::Interval: return detail::plan_interval(q, params);
    case SpaceKind::Circle: return detail::plan_circle(q, params);
    case SpaceKind::Lollipop: return detail::plan_lollipop(q, params);
    }
    throw Error(ErrorCode::UnsupportedQuery, "unknown space");
}

/// State at time t of a sampled path, interpolating each robot along the track.
inline ConfigState state_at(SpaceKind space, const std::vector<PlanSample>& samples, double t) {
    if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
    if (t <= samples.front().t) return samples.front().state;
    if (t >= samples.back().t) return samples.back().state;
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const PlanSample& s) { return v < s.t; });
    const PlanSample& hi = *it;
    const PlanSample& lo = *(it - 1);
    double span = hi.t - lo.t;
    double lambda = span > 0.0 ? (t - lo.t) / span : 1.0;
    return {geodesic_point(space, lo.state.a, hi.state.a, lambda), geodesic_point(space, lo.state.b, hi.state.b, lambda)};
}

} // namespace tcrobots
