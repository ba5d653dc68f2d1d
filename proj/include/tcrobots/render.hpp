#pragma once

// SVG frames of a trajectory: the physical track with both robots on the
// left, the flat configuration-space picture with the state dot on the right.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "tcrobots/skeleton.hpp"
#include "tcrobots/trajectory.hpp"

namespace tcrobots {

struct RenderSpec {
    std::size_t frames = 120;
    int width = 800;
    int height = 400;
};

namespace detail {

inline constexpr double kPi = 3.14159265358979323846;

struct Pixel {
    double x, y;
};

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

inline std::string num(double v) { return fmt("%.2f", v); }

class TrackLayout {
public:
    TrackLayout(SpaceKind space, const RenderSpec& spec) : space_(space) {
        const double panel = spec.width / 2.0;
        const double room_w = panel - 40.0;
        const double room_h = spec.height - 80.0;
        const double mid_y = spec.height / 2.0;
        switch (space) {
        case SpaceKind::Interval:
            unit_ = room_w;
            junction_ = {(panel + unit_) / 2.0, mid_y};
            break;
        case SpaceKind::Circle:
            radius_ = std::min(room_w, room_h) / 2.0;
            unit_ = 2.0 * kPi * radius_;
            junction_ = {panel / 2.0, mid_y + radius_};
            break;
        case SpaceKind::Lollipop: {
            unit_ = std::min(room_w / (1.0 + 1.0 / kPi), room_h * kPi);
            radius_ = unit_ / (2.0 * kPi);
            double left = (panel - unit_ - 2.0 * radius_) / 2.0;
            junction_ = {left + unit_, mid_y + radius_};
            break;
        }
        }
        centre_ = {junction_.x, junction_.y - radius_};
    }

    Pixel at(PhysPoint p) const {
        if (p.edge == Edge::Interval) return {junction_.x - unit_ * (1.0 - p.t), junction_.y};
        double theta = -kPi / 2.0 + 2.0 * kPi * p.t;
        return {centre_.x + radius_ * std::cos(theta), centre_.y - radius_ * std::sin(theta)};
    }

    std::string track_svg() const {
        std::string out;
        const std::string style = " fill=\"none\" stroke=\"#555555\" stroke-width=\"2\"/>\n";
        if (space_ != SpaceKind::Circle)
            out += "<line x1=\"" + num(junction_.x - unit_) + "\" y1=\"" + num(junction_.y) + "\" x2=\"" +
                   num(junction_.x) + "\" y2=\"" + num(junction_.y) + "\"" + style;
        if (space_ != SpaceKind::Interval)
            out += "<circle cx=\"" + num(centre_.x) + "\" cy=\"" + num(centre_.y) + "\" r=\"" + num(radius_) + "\"" +
                   style;
        return out;
    }

private:
    SpaceKind space_;
    double unit_ = 0, radius_ = 0;
    Pixel junction_{}, centre_{};
};

inline std::string triangle(Pixel p, bool filled, const char* label) {
    const double s = 9.0;
    std::string pts = num(p.x) + "," + num(p.y - s) + " " + num(p.x - s) + "," + num(p.y + s * 0.7) + " " +
                      num(p.x + s) + "," + num(p.y + s * 0.7);
    std::string out = "<polygon points=\"" + pts + "\" stroke=\"#1f4e79\" stroke-width=\"2\" fill=\"" +
                      (filled ? "#1f4e79" : "none") + "\"/>\n";
    out += "<text x=\"" + num(p.x + 11.0) + "\" y=\"" + num(p.y - 8.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
    return out;
}

/// Flat picture: each robot coordinate laid along [0, 1) for the interval
/// followed by [1, 2) for the circle on the lollipop.
class FlatLayout {
public:
    FlatLayout(SpaceKind space, const RenderSpec& spec) : space_(space) {
        double panel = spec.width / 2.0;
        side_ = std::min(panel - 40.0, spec.height - 40.0);
        origin_ = {panel + (panel - side_) / 2.0, (spec.height + side_) / 2.0};
        extent_ = space == SpaceKind::Lollipop ? 2.0 : 1.0;
    }

    double coord(PhysPoint p) const {
        if (space_ == SpaceKind::Lollipop && p.edge == Edge::Circle) return 1.0 + p.t;
        return p.t;
    }

    Pixel at(const ConfigState& x) const {
        return {origin_.x + side_ * coord(x.a) / extent_, origin_.y - side_ * coord(x.b) / extent_};
    }

    std::string frame_svg() const {
        std::string out;
        int blocks = space_ == SpaceKind::Lollipop ? 2 : 1;
        double cell = side_ / blocks;
        const char* names[2][2] = {{"II", "IC"}, {"CI", "CC"}};
        for (int i = 0; i < blocks; ++i) {
            for (int j = 0; j < blocks; ++j) {
                double x = origin_.x + i * cell;
                double y = origin_.y - (j + 1) * cell;
                out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cell) + "\" height=\"" +
                       num(cell) + "\" fill=\"#f4f4f4\" stroke=\"#999999\"/>\n";
                if (blocks == 2)
                    out += "<text x=\"" + num(x + 4.0) + "\" y=\"" + num(y + 14.0) +
                           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#777777\">" + names[i][j] +
                           "</text>\n";
            }
        }
        // removed diagonal
        out += "<line x1=\"" + num(origin_.x) + "\" y1=\"" + num(origin_.y) + "\" x2=\"" + num(origin_.x + side_) +
               "\" y2=\"" + num(origin_.y - side_) + "\" stroke=\"#cc3333\" stroke-dasharray=\"4 3\"/>\n";
        return out;
    }

    std::string dot(Pixel p, double r, const char* fill) const {
        return "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\"/>\n";
    }

private:
    SpaceKind space_;
    double side_ = 0, extent_ = 1;
    Pixel origin_{};
};

inline constexpr std::size_t kOverlaySamples = 65;

/// Half-unit locus drawn over the flat picture: the skeleton on the lollipop,
/// the two antipodal lines on the circle.
inline std::vector<ConfigState> overlay_states(SpaceKind space) {
    std::vector<ConfigState> out;
    if (space == SpaceKind::Lollipop) {
        SkeletonGraph g = skeleton_build();
        for (const auto& e : g.edges()) {
            auto pts = g.sample_edge(e.id, kOverlaySamples);
            out.insert(out.end(), pts.begin(), pts.end());
        }
    } else if (space == SpaceKind::Circle) {
        for (std::size_t k = 0; k < 2 * kOverlaySamples; ++k) {
            double t = static_cast<double>(k) / (2.0 * kOverlaySamples);
            out.push_back({{Edge::Circle, t}, {Edge::Circle, wrap01(t + 0.5)}});
        }
    }
    return out;
}

} // namespace detail

/// One SVG document per frame.
inline std::vector<std::string> render_svg_frames(const TrajectoryFile& traj, const RenderSpec& spec) {
    if (spec.frames < 1) throw Error(ErrorCode::InvalidArgument, "at least one frame is required");
    if (spec.width < 200 || spec.height < 150) throw Error(ErrorCode::InvalidArgument, "canvas too small");
    if (traj.samples.empty()) throw Error(ErrorCode::InvalidArgument, "trajectory has no samples");

    const SpaceKind space = traj.query.space;
    const bool two = traj.query.robots == 2;
    detail::TrackLayout track(space, spec);
    detail::FlatLayout flat(space, spec);

    std::string background = "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + track.track_svg() +
                             flat.frame_svg();
    for (const auto& x : detail::overlay_states(space)) background += flat.dot(flat.at(x), 1.2, "#2e8b57");

    std::vector<PlanSample> poly;
    poly.reserve(traj.samples.size());
    for (const auto& s : traj.samples) poly.push_back({s.t, s.state});

    std::vector<std::string> out;
    out.reserve(spec.frames);
    for (std::size_t f = 0; f < spec.frames; ++f) {
        double u = spec.frames == 1 ? 0.0 : static_cast<double>(f) / static_cast<double>(spec.frames - 1);
        ConfigState x = state_at(space, poly, u);
        std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" "
                          "width=\"" +
                          std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) + "\">\n";
        svg += background;
        svg += detail::triangle(track.at(x.a), true, "A");
        if (two) svg += detail::triangle(track.at(x.b), false, "B");
        if (two) svg += flat.dot(flat.at(x), 4.0, "#1f4e79");
        svg += "<text x=\"10\" y=\"" + std::to_string(spec.height - 10) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + std::string(to_string(traj.region)) + "  t=" +
               detail::fmt("%.3f", u) + "</text>\n";
        svg += "</svg>\n";
        out.push_back(std::move(svg));
    }
    return out;
}

/// Writes frame_0000.svg, frame_0001.svg, ... into outdir and returns the paths.
inline std::vector<std::string> render_frames(const TrajectoryFile& traj, const RenderSpec& spec,
                                              const std::string& outdir) {
    auto frames = render_svg_frames(traj, spec);
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw Error(ErrorCode::IOFailure, "cannot create " + outdir + ": " + ec.message());
    std::vector<std::string> paths;
    paths.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.svg", i);
        std::string path = (std::filesystem::path(outdir) / name).string();
        detail::write_text(path, frames[i]);
        paths.push_back(path);
    }
    return paths;
}

} // namespace tcrobots
