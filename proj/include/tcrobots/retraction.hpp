#pragma once

// Deformation retractions of the two-robot configuration space onto the
// antipodal circle (circle track) and onto the skeleton (lollipop track).
//
// Lollipop flow, separation below one half: each robot moves away from the
// other with speed min(1, kappa * distance-to-junction). A robot on the
// junction or pushed against the free end stays put. Because a robot's
// direction is fixed for the whole flow and its speed depends only on its own
// position, each robot's travel is known in closed form; only the stopping
// time is found numerically.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "tcrobots/config.hpp"
#include "tcrobots/skeleton.hpp"

namespace tcrobots {

struct FlowParams {
    double kappa = 4.0; ///< junction damping slope
    double step = 1e-3; ///< maximum per-robot arc length between samples
    double tol = 1e-6;  ///< skeleton snapping tolerance
};

struct FlowSample {
    double time;
    ConfigState state;
};

struct FlowPath {
    std::vector<FlowSample> samples;
    std::optional<SkeletonPoint> skeleton_terminal; // lollipop flows
    std::optional<double> antipodal_terminal;       // circle flows: robot B on the antipodal circle
    bool reversed = false;

    const ConfigState& front() const { return samples.front().state; }
    const ConfigState& back() const { return samples.back().state; }
};

/// Rounds t to a multiple of 2^-52 so that 1 - (1 - t) == t for t in [0, 1].
inline double quantize_time(double t) { return std::ldexp(std::round(std::ldexp(t, 52)), -52); }

inline FlowPath reverse(FlowPath path) {
    std::reverse(path.samples.begin(), path.samples.end());
    for (auto& s : path.samples) s.time = 1.0 - s.time;
    path.reversed = !path.reversed;
    return path;
}

namespace detail {

inline FlowPath constant_flow(const ConfigState& x) { return FlowPath{{{0.0, x}, {1.0, x}}, {}, {}, false}; }

inline std::size_t segments_for(double travel, double step) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(travel / step - 1e-9)));
}

/// Travel of one robot under speed min(1, kappa * r), r its junction distance.
class MotionProfile {
public:
    MotionProfile(PhysPoint start, Direction dir, double kappa) : start_(start), dir_(dir), kappa_(kappa) {
        if (dir == Direction::Parked) return;
        struct Linear {
            double x0, x1, r0;
            int slope;
        };
        std::vector<Linear> lines;
        switch (dir) {
        case Direction::IntervalDown:
            lines.push_back({0.0, start.t, 1.0 - start.t, +1});
            end_ = start.t;
            break;
        case Direction::IntervalUp:
            lines.push_back({0.0, 1.0 - start.t, 1.0 - start.t, -1});
            end_ = 1.0 - start.t;
            break;
        case Direction::CircleCCW:
        case Direction::CircleCW: {
            // mirror clockwise motion onto counterclockwise motion
            double c = dir == Direction::CircleCCW ? start.t : (start.t == 0.0 ? 0.0 : 1.0 - start.t);
            if (c < 0.5) {
                lines.push_back({0.0, 0.5 - c, c, +1});
                lines.push_back({0.5 - c, 1.0 - c, 0.5, -1});
            } else {
                lines.push_back({0.0, 1.0 - c, 1.0 - c, -1});
            }
            end_ = 1.0 - c;
            break;
        }
        case Direction::Parked: break;
        }

        const double knee = 1.0 / kappa;
        double clock = 0.0;
        for (const auto& ln : lines) {
            double r1 = ln.r0 + ln.slope * (ln.x1 - ln.x0);
            std::vector<double> cuts{ln.x0};
            double xk = ln.x0 + (knee - ln.r0) * ln.slope;
            if (xk > ln.x0 && xk < ln.x1) cuts.push_back(xk);
            cuts.push_back(ln.x1);
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                Piece p;
                p.x0 = cuts[i];
                p.x1 = cuts[i + 1];
                if (p.x1 <= p.x0) continue;
                p.r0 = ln.r0 + ln.slope * (p.x0 - ln.x0);
                p.slope = ln.slope;
                double r_end = i + 2 == cuts.size() ? r1 : ln.r0 + ln.slope * (p.x1 - ln.x0);
                double r_mid = 0.5 * (p.r0 + r_end);
                p.damped = kappa * r_mid < 1.0;
                p.t0 = clock;
                if (!p.damped)
                    clock += p.x1 - p.x0;
                else if (p.slope > 0)
                    clock += std::log(r_end / p.r0) / kappa;
                else
                    clock = r_end <= 0.0 ? std::numeric_limits<double>::infinity()
                                         : clock + std::log(p.r0 / r_end) / kappa;
                p.t1 = clock;
                pieces_.push_back(p);
                if (!std::isfinite(clock)) return;
            }
        }
    }

    bool parked() const { return dir_ == Direction::Parked; }

    double travel_at(double time) const {
        if (parked() || time <= 0.0) return 0.0;
        for (const auto& p : pieces_) {
            if (time >= p.t1) continue;
            double dt = time - p.t0;
            if (!p.damped) return p.x0 + dt;
            if (p.slope > 0) return p.x0 + p.r0 * std::expm1(kappa_ * dt);
            return p.x0 - p.r0 * std::expm1(-kappa_ * dt);
        }
        return end_;
    }

    double time_at(double x) const {
        if (parked() || x <= 0.0) return 0.0;
        for (const auto& p : pieces_) {
            if (x > p.x1) continue;
            double dx = x - p.x0;
            if (!p.damped) return p.t0 + dx;
            if (p.slope > 0) return p.t0 + std::log1p(dx / p.r0) / kappa_;
            return p.t0 - std::log1p(-dx / p.r0) / kappa_;
        }
        return pieces_.empty() ? 0.0 : pieces_.back().t1;
    }

    PhysPoint point_at(double x) const {
        if (parked()) return start_;
        return move_along(SpaceKind::Lollipop, start_, dir_, std::min(x, end_), true);
    }

private:
    struct Piece {
        double x0 = 0, x1 = 0, r0 = 0;
        int slope = 1;
        bool damped = false;
        double t0 = 0, t1 = 0;
    };
    PhysPoint start_;
    Direction dir_;
    double kappa_;
    double end_ = 0.0;
    std::vector<Piece> pieces_;
};

inline double distance_to_free_end(PhysPoint p) {
    return p.edge == Edge::Interval ? p.t : 1.0 + std::min(p.t, 1.0 - p.t);
}

inline FlowPath single_mover_flow(const ConfigState& x, const FlowParams& params) {
    bool a_moves = distance_to_free_end(x.a) < distance_to_free_end(x.b);
    PhysPoint mover = a_moves ? x.a : x.b;
    PhysPoint other = a_moves ? x.b : x.a;
    double target = other.edge == Edge::Interval ? other.t - 0.5 : 0.5 + std::min(other.t, 1.0 - other.t);

    std::size_t n = segments_for(target - mover.t, params.step);
    FlowPath path;
    path.samples.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double lambda = static_cast<double>(k) / static_cast<double>(n);
        double t = k == n ? target : mover.t + (target - mover.t) * lambda;
        PhysPoint p = k == 0 ? mover : canonicalize(SpaceKind::Lollipop, PhysPoint{Edge::Interval, t});
        ConfigState s = a_moves ? ConfigState{p, other} : ConfigState{other, p};
        path.samples.push_back({quantize_time(lambda), s});
    }
    path.skeleton_terminal = skeleton_locate(path.back(), params.tol);
    return path;
}

inline FlowPath spreading_flow(const ConfigState& x, double d0, const FlowParams& params) {
    const SpaceKind L = SpaceKind::Lollipop;
    MotionProfile pa(x.a, away_direction(L, x.a, x.b).value_or(Direction::Parked), params.kappa);
    MotionProfile pb(x.b, away_direction(L, x.b, x.a).value_or(Direction::Parked), params.kappa);

    // Each robot lengthens the unique shortest path, so separation = d0 + travel_a + travel_b.
    const double needed = kHalfUnit - d0;
    auto spread = [&](double T) { return pa.travel_at(T) + pb.travel_at(T); };
    double lo = 0.0, hi = 1.0;
    while (spread(hi) < needed) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw Error(ErrorCode::FlowStall, "separation never reached one half");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        double mid = 0.5 * (lo + hi);
        (spread(mid) < needed ? lo : hi) = mid;
    }
    const double T = hi;

    std::vector<double> times{0.0, T};
    for (const MotionProfile* p : {&pa, &pb}) {
        double total = p->travel_at(T);
        std::size_t n = segments_for(total, params.step);
        for (std::size_t k = 1; k < n; ++k) times.push_back(p->time_at(total * static_cast<double>(k) / n));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [T](double u, double v) { return v - u <= 1e-14 * T; }),
                times.end());
    times.back() = T;

    FlowPath path;
    path.samples.reserve(times.size());
    for (double tau : times) {
        ConfigState s = tau == 0.0 ? x : ConfigState{pa.point_at(pa.travel_at(tau)), pb.point_at(pb.travel_at(tau))};
        path.samples.push_back({quantize_time(tau / T), s});
    }
    path.samples.back().time = 1.0;
    SkeletonPoint terminal = skeleton_locate(path.back(), params.tol);
    path.samples.back().state = embed(terminal);
    path.skeleton_terminal = terminal;
    return path;
}

} // namespace detail

/// Circle track: robot A walks away from robot B to B's antipode; B stays put.
inline FlowPath retract_circle(const ConfigState& state, const FlowParams& params = {}) {
    const ConfigState x = canonicalize(SpaceKind::Circle, state);
    const double offset = wrap01(x.a.t - x.b.t); // how far A is counterclockwise of B
    const double target = wrap01(x.b.t + 0.5);
    const double travel = std::abs(offset - 0.5);

    FlowPath path;
    path.antipodal_terminal = x.b.t;
    if (travel <= 1e-15) {
        path.samples = detail::constant_flow(x).samples;
        return path;
    }
    const double sign = offset < 0.5 ? 1.0 : -1.0;
    std::size_t n = detail::segments_for(travel, params.step);
    path.samples.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double lambda = static_cast<double>(k) / static_cast<double>(n);
        PhysPoint a = k == 0 ? x.a : PhysPoint{Edge::Circle, k == n ? target : wrap01(x.a.t + sign * travel * lambda)};
        path.samples.push_back({quantize_time(lambda), {a, x.b}});
    }
    return path;
}

/// Lollipop track: flow onto the skeleton.
///
/// Above one half the robot nearer the free end climbs toward the other one
/// while the other stays fixed; below one half both spread apart.
inline FlowPath retract_lollipop(const ConfigState& state, const FlowParams& params = {}) {
    if (!(params.kappa > 0.0) || !(params.step > 0.0))
        throw Error(ErrorCode::InvalidArgument, "kappa and step must be positive");
    const ConfigState x = canonicalize(SpaceKind::Lollipop, state);
    const double d0 = separation(SpaceKind::Lollipop, x);
    if (std::abs(d0 - kHalfUnit) <= 1e-12) {
        FlowPath path = detail::constant_flow(x);
        path.skeleton_terminal = skeleton_locate(x, params.tol);
        return path;
    }
    if (d0 > kHalfUnit) return detail::single_mover_flow(x, params);
    return detail::spreading_flow(x, d0, params);
}

} // namespace tcrobots
