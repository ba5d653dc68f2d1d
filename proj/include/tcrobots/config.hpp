#pragma once

#include <string>
#include <string_view>

#include "tcrobots/spaces.hpp"

namespace tcrobots {

/// Positions of robot A and robot B.
struct ConfigState {
    PhysPoint a;
    PhysPoint b;

    friend bool operator==(const ConfigState&, const ConfigState&) = default;
};

inline double separation(SpaceKind space, const ConfigState& x) { return dist(space, x.a, x.b); }

/// L1 distance in configuration space: the sum of both robots' track distances.
inline double config_distance(SpaceKind space, const ConfigState& x, const ConfigState& y) {
    return dist(space, x.a, y.a) + dist(space, x.b, y.b);
}

inline ConfigState canonicalize(SpaceKind space, const ConfigState& x) {
    ConfigState c{canonicalize(space, x.a), canonicalize(space, x.b)};
    if (c.a == c.b) throw Error(ErrorCode::IllegalCoordinate, "robots collide");
    return c;
}

inline ConfigState swapped(const ConfigState& x) { return {x.b, x.a}; }

enum class Block { II, IC, CI, CC };

inline std::string_view to_string(Block b) {
    switch (b) {
    case Block::II: return "II";
    case Block::IC: return "IC";
    case Block::CI: return "CI";
    case Block::CC: return "CC";
    }
    return "?";
}

/// Position in the flat picture: block chosen by the edge tags, u for A and v for B.
struct FlatCoord {
    Block block = Block::II;
    double u = 0.0;
    double v = 0.0;

    friend bool operator==(const FlatCoord&, const FlatCoord&) = default;
};

inline FlatCoord to_flat(const ConfigState& x) {
    bool ai = x.a.edge == Edge::Interval;
    bool bi = x.b.edge == Edge::Interval;
    Block block = ai ? (bi ? Block::II : Block::IC) : (bi ? Block::CI : Block::CC);
    return {block, x.a.t, x.b.t};
}

inline ConfigState from_flat(const FlatCoord& f) {
    Edge ea = (f.block == Block::II || f.block == Block::IC) ? Edge::Interval : Edge::Circle;
    Edge eb = (f.block == Block::II || f.block == Block::CI) ? Edge::Interval : Edge::Circle;
    return {{ea, f.u}, {eb, f.v}};
}

/// Continuity domain assigned to a planning query.
enum class RegionLabel { CircleU, CircleV, V1, V2, V3, Whole };

inline std::string_view to_string(RegionLabel r) {
    switch (r) {
    case RegionLabel::CircleU: return "CircleU";
    case RegionLabel::CircleV: return "CircleV";
    case RegionLabel::V1: return "V1";
    case RegionLabel::V2: return "V2";
    case RegionLabel::V3: return "V3";
    case RegionLabel::Whole: return "Whole";
    }
    return "?";
}

inline RegionLabel parse_region(std::string_view s) {
    for (RegionLabel r : {RegionLabel::CircleU, RegionLabel::CircleV, RegionLabel::V1, RegionLabel::V2,
                          RegionLabel::V3, RegionLabel::Whole})
        if (to_string(r) == s) return r;
    throw Error(ErrorCode::ParseError, "unknown region '" + std::string(s) + "'");
}

} // namespace tcrobots
