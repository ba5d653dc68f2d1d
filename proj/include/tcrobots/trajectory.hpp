#pragma once

// Plan and trajectory files. Points use the "I:<t>" / "C:<t>" encoding with
// 15 significant digits; a configuration is "a,b".

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcrobots/planners.hpp"

namespace tcrobots {

inline std::string encode_state(const ConfigState& x, int robots = 2) {
    if (robots == 1) return encode_point(x.a);
    return encode_point(x.a) + "," + encode_point(x.b);
}

/// Parses "I:0.2,C:0.7" (two robots) or "C:0.3" (one robot; b mirrors a).
inline ConfigState parse_state(std::string_view text, int robots = 2) {
    auto comma = text.find(',');
    if (robots == 1) {
        if (comma != std::string_view::npos) throw Error(ErrorCode::ParseError, "expected a single point");
        PhysPoint p = parse_point(text);
        return {p, p};
    }
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
        throw Error(ErrorCode::ParseError, "expected two points separated by a comma");
    return {parse_point(text.substr(0, comma)), parse_point(text.substr(comma + 1))};
}

struct TrajectoryRow {
    double t;
    ConfigState state;
};

struct TrajectoryFile {
    int version = 1;
    PlanQuery query;
    RegionLabel region = RegionLabel::Whole;
    std::string instruction;
    PlanParams params;
    std::vector<TrajectoryRow> samples;
};

/// N samples uniform in normalized time, interpolated along the track.
inline TrajectoryFile resample(const Plan& plan, std::size_t n, const PlanParams& params = {}) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "resample needs at least two samples");
    TrajectoryFile out;
    out.query = plan.query;
    out.region = plan.region;
    out.instruction = instruction_text(plan.region, plan.query.space, plan.query.robots);
    out.params = params;
    const auto poly = plan.polyline();
    const double T = plan.duration();
    out.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        double u = k + 1 == n ? 1.0 : static_cast<double>(k) / static_cast<double>(n - 1);
        out.samples.push_back({u, state_at(plan.query.space, poly, u * T)});
    }
    return out;
}

namespace detail {

using nlohmann::ordered_json;

inline ordered_json query_json(const PlanQuery& q) {
    return ordered_json{{"space", std::string(to_string(q.space))},
                        {"robots", q.robots},
                        {"start", encode_state(q.start, q.robots)},
                        {"goal", encode_state(q.goal, q.robots)}};
}

inline PlanQuery query_from_json(const ordered_json& j) {
    PlanQuery q;
    q.space = parse_space(j.at("space").get<std::string>());
    q.robots = j.at("robots").get<int>();
    q.start = parse_state(j.at("start").get<std::string>(), q.robots);
    q.goal = parse_state(j.at("goal").get<std::string>(), q.robots);
    return q;
}

inline ordered_json sample_json(double t, const ConfigState& x, int robots) {
    ordered_json s{{"t", t}, {"a", encode_point(x.a)}};
    if (robots == 2) s["b"] = encode_point(x.b);
    return s;
}

inline TrajectoryRow sample_from_json(const ordered_json& j, SpaceKind space, int robots) {
    PhysPoint a = canonicalize(space, parse_point(j.at("a").get<std::string>()));
    PhysPoint b = robots == 2 ? canonicalize(space, parse_point(j.at("b").get<std::string>())) : a;
    return {j.at("t").get<double>(), {a, b}};
}

template <class F>
auto guard_parse(F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::IOFailure, "write failed for " + path);
}

} // namespace detail

// ---- plan JSON --------------------------------------------------------------

inline nlohmann::ordered_json plan_to_json(const Plan& plan) {
    using detail::ordered_json;
    ordered_json steps = ordered_json::array();
    for (const auto& step : plan.steps) {
        ordered_json samples = ordered_json::array();
        for (const auto& s : step.samples) samples.push_back(detail::sample_json(s.t, s.state, plan.query.robots));
        steps.push_back({{"tag", std::string(to_string(step.tag))}, {"samples", std::move(samples)}});
    }
    return ordered_json{{"query", detail::query_json(plan.query)},
                        {"region", std::string(to_string(plan.region))},
                        {"instruction", instruction_text(plan.region, plan.query.space, plan.query.robots)},
                        {"route", plan.route},
                        {"steps", std::move(steps)}};
}

inline std::string write_plan_json(const Plan& plan) { return plan_to_json(plan).dump(2) + "\n"; }

inline Plan read_plan_json(const std::string& text) {
    return detail::guard_parse([&] {
        auto j = detail::ordered_json::parse(text);
        Plan plan;
        plan.query = detail::query_from_json(j.at("query"));
        plan.region = parse_region(j.at("region").get<std::string>());
        if (j.contains("route")) plan.route = j.at("route").get<std::string>();
        for (const auto& sj : j.at("steps")) {
            PlanStep step{parse_step_tag(sj.at("tag").get<std::string>()), {}};
            for (const auto& row : sj.at("samples")) {
                auto r = detail::sample_from_json(row, plan.query.space, plan.query.robots);
                step.samples.push_back({r.t, r.state});
            }
            if (step.samples.empty()) throw Error(ErrorCode::ParseError, "plan step without samples");
            plan.steps.push_back(std::move(step));
        }
        return plan;
    });
}

inline void save_plan(const Plan& plan, const std::string& path) { detail::write_text(path, write_plan_json(plan)); }
inline Plan load_plan(const std::string& path) { return read_plan_json(detail::read_text(path)); }

// ---- trajectory JSON / CSV --------------------------------------------------

inline std::string write_trajectory_json(const TrajectoryFile& f) {
    using detail::ordered_json;
    ordered_json samples = ordered_json::array();
    for (const auto& s : f.samples) samples.push_back(detail::sample_json(s.t, s.state, f.query.robots));
    ordered_json j{{"version", f.version},
                   {"space", std::string(to_string(f.query.space))},
                   {"query", detail::query_json(f.query)},
                   {"region", std::string(to_string(f.region))},
                   {"instruction", f.instruction},
                   {"params",
                    {{"kappa", f.params.flow.kappa},
                     {"step", f.params.flow.step},
                     {"tol", f.params.flow.tol},
                     {"tol_antipodal", f.params.tol_antipodal}}},
                   {"samples", std::move(samples)}};
    return j.dump(2) + "\n";
}

inline TrajectoryFile read_trajectory_json(const std::string& text) {
    return detail::guard_parse([&] {
        auto j = detail::ordered_json::parse(text);
        TrajectoryFile f;
        f.version = j.at("version").get<int>();
        if (f.version != 1) throw Error(ErrorCode::ParseError, "unsupported trajectory version");
        f.query = detail::query_from_json(j.at("query"));
        f.region = parse_region(j.at("region").get<std::string>());
        f.instruction = j.at("instruction").get<std::string>();
        const auto& p = j.at("params");
        f.params.flow.kappa = p.at("kappa").get<double>();
        f.params.flow.step = p.at("step").get<double>();
        f.params.flow.tol = p.at("tol").get<double>();
        f.params.tol_antipodal = p.at("tol_antipodal").get<double>();
        for (const auto& row : j.at("samples")) f.samples.push_back(detail::sample_from_json(row, f.query.space, f.query.robots));
        for (std::size_t i = 1; i < f.samples.size(); ++i)
            if (!(f.samples[i].t > f.samples[i - 1].t))
                throw Error(ErrorCode::ParseError, "sample times must increase strictly");
        return f;
    });
}

inline std::string write_trajectory_csv(const TrajectoryFile& f) {
    std::string out = f.query.robots == 2 ? "t,a,b\n" : "t,a\n";
    char buf[32];
    for (const auto& s : f.samples) {
        std::snprintf(buf, sizeof buf, "%.15g", s.t);
        out += buf;
        out += ',' + encode_point(s.state.a);
        if (f.query.robots == 2) out += ',' + encode_point(s.state.b);
        out += '\n';
    }
    return out;
}

} // namespace tcrobots
