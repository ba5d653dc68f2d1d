#pragma once

// Coordinate models and track metric for the interval, the circle and the
// lollipop (a unit circle with a unit interval glued at the junction).
//
// Interval coordinates run from the free end (t = 0) to the junction
// (t = 1). Circle coordinates run counterclockwise from the junction
// (t = 0); the pole sits at t = 1/2. On the lollipop the junction is always
// stored as Circle t = 0.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "tcrobots/error.hpp"

namespace tcrobots {

enum class SpaceKind { Interval, Circle, Lollipop };

enum class Edge { Interval, Circle };

struct PhysPoint {
    Edge edge = Edge::Interval;
    double t = 0.0;

    friend bool operator==(const PhysPoint&, const PhysPoint&) = default;
};

enum class Direction { IntervalUp, IntervalDown, CircleCW, CircleCCW, Parked };

inline constexpr double kHalfUnit = 0.5;

inline std::string_view to_string(SpaceKind s) {
    switch (s) {
    case SpaceKind::Interval: return "interval";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Lollipop: return "lollipop";
    }
    return "?";
}

inline SpaceKind parse_space(std::string_view name) {
    if (name == "interval") return SpaceKind::Interval;
    if (name == "circle") return SpaceKind::Circle;
    if (name == "lollipop") return SpaceKind::Lollipop;
    throw Error(ErrorCode::InvalidArgument, "unknown space '" + std::string(name) + "'");
}

inline std::string_view to_string(Direction d) {
    switch (d) {
    case Direction::IntervalUp: return "IntervalUp";
    case Direction::IntervalDown: return "IntervalDown";
    case Direction::CircleCW: return "CircleCW";
    case Direction::CircleCCW: return "CircleCCW";
    case Direction::Parked: return "Parked";
    }
    return "?";
}

/// Reduces x into [0, 1).
inline double wrap01(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

/// Reduces a circle displacement into (-1/2, 1/2].
inline double wrap_half(double x) {
    double r = wrap01(x);
    return r > kHalfUnit ? r - 1.0 : r;
}

inline PhysPoint junction() { return {Edge::Circle, 0.0}; }

inline bool is_junction(SpaceKind space, PhysPoint p) {
    return space == SpaceKind::Lollipop && p.edge == Edge::Circle && p.t == 0.0;
}

inline PhysPoint canonicalize(SpaceKind space, PhysPoint p) {
    if (!std::isfinite(p.t) || p.t < 0.0 || p.t > 1.0)
        throw Error(ErrorCode::IllegalCoordinate, "coordinate out of range");
    switch (space) {
    case SpaceKind::Interval:
        if (p.edge != Edge::Interval)
            throw Error(ErrorCode::IllegalCoordinate, "circle coordinate on the interval");
        return p;
    case SpaceKind::Circle:
        if (p.edge != Edge::Circle)
            throw Error(ErrorCode::IllegalCoordinate, "interval coordinate on the circle");
        return {Edge::Circle, p.t == 1.0 ? 0.0 : p.t};
    case SpaceKind::Lollipop:
        if (p.t == 1.0) return junction();
        return p;
    }
    return p;
}

/// Distance from a lollipop point to the junction.
inline double dist_to_junction(PhysPoint p) {
    return p.edge == Edge::Interval ? 1.0 - p.t : std::min(p.t, 1.0 - p.t);
}

/// Length of the shortest path joining p and q inside the track.
inline double dist(SpaceKind space, PhysPoint p, PhysPoint q) {
    p = canonicalize(space, p);
    q = canonicalize(space, q);
    if (p.edge == Edge::Interval && q.edge == Edge::Interval) return std::abs(p.t - q.t);
    if (p.edge == Edge::Circle && q.edge == Edge::Circle) {
        double d = std::abs(p.t - q.t);
        return std::min(d, 1.0 - d);
    }
    const PhysPoint& i = p.edge == Edge::Interval ? p : q;
    const PhysPoint& c = p.edge == Edge::Interval ? q : p;
    return (1.0 - i.t) + std::min(c.t, 1.0 - c.t);
}

inline bool is_generalized_antipodal(SpaceKind space, PhysPoint p, PhysPoint q, double tol) {
    return std::abs(dist(space, p, q) - kHalfUnit) <= tol;
}

/// Direction at `subject` that moves it away from `other`.
///
/// Requires 0 < dist < 1/2 so the geodesic between the robots is unique.
/// Returns std::nullopt when the subject sits on the lollipop junction,
/// where more than one direction increases the distance.
inline std::optional<Direction> away_direction(SpaceKind space, PhysPoint subject, PhysPoint other) {
    subject = canonicalize(space, subject);
    other = canonicalize(space, other);
    double d = dist(space, subject, other);
    if (d <= 0.0 || d >= kHalfUnit)
        throw Error(ErrorCode::DegenerateQuery, "away direction needs 0 < dist < 1/2");
    if (is_junction(space, subject)) return std::nullopt;

    if (subject.edge == Edge::Interval) {
        bool other_above = other.edge == Edge::Circle || other.t > subject.t;
        if (other_above) return subject.t == 0.0 ? Direction::Parked : Direction::IntervalDown;
        if (space == SpaceKind::Interval && subject.t == 1.0) return Direction::Parked;
        return Direction::IntervalUp;
    }
    if (other.edge == Edge::Circle) {
        // other lies counterclockwise-ahead of subject along the short arc
        bool other_ccw_ahead = wrap01(other.t - subject.t) < kHalfUnit;
        return other_ccw_ahead ? Direction::CircleCW : Direction::CircleCCW;
    }
    // other on the stick: the short path leaves through the junction
    return subject.t < kHalfUnit ? Direction::CircleCCW : Direction::CircleCW;
}

/// Moves `p` by `arclen` along `dir`. With `clamp`, overshooting a dead end
/// stops at it instead of failing.
inline PhysPoint move_along(SpaceKind space, PhysPoint p, Direction dir, double arclen, bool clamp = false) {
    p = canonicalize(space, p);
    if (!(arclen >= 0.0)) throw Error(ErrorCode::IllegalMove, "negative arc length");
    if (dir == Direction::Parked || arclen == 0.0) return p;

    switch (dir) {
    case Direction::CircleCCW:
    case Direction::CircleCW: {
        if (p.edge != Edge::Circle) throw Error(ErrorCode::IllegalMove, "circle move off the circle");
        double sign = dir == Direction::CircleCCW ? 1.0 : -1.0;
        return {Edge::Circle, wrap01(p.t + sign * arclen)};
    }
    case Direction::IntervalDown: {
        double t = 0.0;
        if (p.edge == Edge::Interval)
            t = p.t - arclen;
        else if (is_junction(space, p))
            t = 1.0 - arclen;
        else
            throw Error(ErrorCode::IllegalMove, "interval move off the interval");
        if (t < 0.0) {
            if (!clamp) throw Error(ErrorCode::IllegalMove, "moved past the free end");
            t = 0.0;
        }
        return canonicalize(space, PhysPoint{Edge::Interval, t});
    }
    case Direction::IntervalUp: {
        if (p.edge != Edge::Interval) throw Error(ErrorCode::IllegalMove, "interval move off the interval");
        double t = p.t + arclen;
        if (t > 1.0) {
            if (!clamp) throw Error(ErrorCode::IllegalMove, "moved past the end of the interval");
            t = 1.0;
        }
        return canonicalize(space, PhysPoint{Edge::Interval, t});
    }
    case Direction::Parked: break;
    }
    return p;
}

/// Point at fraction `lambda` of the way from p to q along a shortest path.
/// On a circle an exact antipodal pair is walked counterclockwise.
inline PhysPoint geodesic_point(SpaceKind space, PhysPoint p, PhysPoint q, double lambda) {
    p = canonicalize(space, p);
    q = canonicalize(space, q);
    if (lambda <= 0.0) return p;
    if (lambda >= 1.0) return q;
    if (p.edge == Edge::Interval && q.edge == Edge::Interval)
        return canonicalize(space, PhysPoint{Edge::Interval, p.t + lambda * (q.t - p.t)});
    if (p.edge == Edge::Circle && q.edge == Edge::Circle) {
        double delta = wrap_half(q.t - p.t);
        return {Edge::Circle, wrap01(p.t + lambda * delta)};
    }
    if (p.edge == Edge::Circle) return geodesic_point(space, q, p, 1.0 - lambda);

    // p on the stick, q on the circle: climb to the junction, then take the short arc
    double up = 1.0 - p.t;
    double arc = std::min(q.t, 1.0 - q.t);
    double s = lambda * (up + arc);
    if (s <= up) return canonicalize(space, PhysPoint{Edge::Interval, p.t + s});
    double along = s - up;
    return {Edge::Circle, q.t <= kHalfUnit ? along : wrap01(1.0 - along)};
}

// Text encoding "I:<t>" / "C:<t>".

inline std::string encode_point(PhysPoint p) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%c:%.15g", p.edge == Edge::Interval ? 'I' : 'C', p.t);
    return buf;
}

inline PhysPoint parse_point(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    if (text.size() < 3 || text[1] != ':' || (text[0] != 'I' && text[0] != 'C'))
        throw Error(ErrorCode::ParseError, "malformed point '" + std::string(text) + "'");
    std::string_view num = text.substr(2);

    int significant = 0;
    bool leading = true;
    for (char ch : num) {
        if (ch == 'e' || ch == 'E') break;
        if (ch < '0' || ch > '9') continue;
        if (leading && ch == '0') continue;
        leading = false;
        ++significant;
    }
    if (significant > 15)
        throw Error(ErrorCode::ParseError, "more than 15 significant digits in '" + std::string(text) + "'");

    double value = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc() || ptr != num.data() + num.size())
        throw Error(ErrorCode::ParseError, "malformed coordinate in '" + std::string(text) + "'");
    return {text[0] == 'I' ? Edge::Interval : Edge::Circle, value};
}

} // namespace tcrobots
