#pragma once

// Command-line driver. `run` never calls std::exit so tests can drive it
// in-process.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tcrobots/homology.hpp"
#include "tcrobots/planners.hpp"
#include "tcrobots/render.hpp"
#include "tcrobots/skeleton.hpp"
#include "tcrobots/trajectory.hpp"
#include "tcrobots/verify.hpp"

namespace tcrobots::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitRefused = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitVerification = 4;

struct CliConfig {
    std::string space = "lollipop";
    int robots = 2;
    std::string start;
    std::string goal;
    int subdivision = 8;
    std::size_t trials = 10000;
    std::uint64_t seed = 42;
    double kappa = 4.0;
    double step = 1e-3;
    double tol_antipodal = 1e-6;
    std::string out;
    bool json = false;

    std::string suite = "all";
    std::string from;
    std::string to;
    std::string plan_path;
    std::size_t frames = 120;
    std::string size = "800x400";
    std::string trajectory_path;
    std::string csv_path;
    bool dump = false;
};

inline int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::SwapImpossible: return kExitRefused;
    case ErrorCode::IllegalCoordinate:
    case ErrorCode::DegenerateQuery:
    case ErrorCode::UnsupportedQuery:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::IOFailure:
    case ErrorCode::RegionMismatch:
    case ErrorCode::NotOnSkeleton:
    case ErrorCode::IllegalMove: return kExitInput;
    case ErrorCode::FlowStall: return kExitInternal;
    }
    return kExitInternal;
}

namespace detail {

using nlohmann::ordered_json;

inline PlanParams plan_params(const CliConfig& c) {
    if (!(c.kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "--kappa must be positive");
    if (!(c.step > 0.0) || c.step > 0.25) throw Error(ErrorCode::InvalidArgument, "--step must lie in (0, 0.25]");
    if (!(c.tol_antipodal >= 0.0)) throw Error(ErrorCode::InvalidArgument, "--tol-antipodal must be nonnegative");
    PlanParams p;
    p.flow.kappa = c.kappa;
    p.flow.step = c.step;
    p.tol_antipodal = c.tol_antipodal;
    return p;
}

inline void emit(std::ostream& out, const ordered_json& j) { out << j.dump(2) << "\n"; }

inline std::string fixed(double v, const char* pattern = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// ---- plan ---------------------------------------------------------------

inline int cmd_plan(const CliConfig& c, std::ostream& out) {
    PlanParams params = plan_params(c);
    PlanQuery q{parse_space(c.space), c.robots, parse_state(c.start, c.robots), parse_state(c.goal, c.robots)};
    Plan p = plan(q, params);
    ValidationReport report = validate_plan(p, q, params);
    if (!c.out.empty()) save_plan(p, c.out);
    if (c.json) {
        out << write_plan_json(p);
    } else {
        out << "region: " << to_string(p.region) << "\n";
        out << "instruction: " << instruction_text(p.region, q.space, q.robots) << "\n";
        if (!p.route.empty()) out << "route: " << p.route << "\n";
        for (const auto& step : p.steps) {
            out << "  " << to_string(step.tag) << ": " << step.samples.size() << " samples, "
                << encode_state(step.samples.front().state, q.robots) << " -> "
                << encode_state(step.samples.back().state, q.robots) << "\n";
        }
        out << "validation: " << (report.ok() ? "ok" : std::string(to_string(report.kind))) << "\n";
        if (!c.out.empty()) out << "wrote " << c.out << "\n";
    }
    return report.ok() ? kExitOk : kExitVerification;
}

// ---- betti / tc -----------------------------------------------------------

inline ordered_json betti_json(const DiscreteConfigComplex& cx, const HomologySummary& h) {
    ordered_json j{{"V", cx.V()}, {"E", cx.E()}, {"F", cx.F()}, {"chi", h.chi}, {"b0", h.b0}, {"b1", h.b1}};
    if (h.b0 == 1) j["tc"] = tc_from_betti(h.b1);
    else j["tc"] = nullptr;
    return j;
}

inline int cmd_betti(const CliConfig& c, std::ostream& out) {
    auto cx = discretize(parse_space(c.space), c.subdivision, c.robots);
    auto h = homology(cx);
    if (c.json) {
        emit(out, betti_json(cx, h));
        return kExitOk;
    }
    out << "V=" << cx.V() << " E=" << cx.E() << " F=" << cx.F() << " chi=" << h.chi << " b0=" << h.b0
        << " b1=" << h.b1;
    if (h.b0 == 1) out << " TC=" << tc_from_betti(h.b1);
    else out << " TC=undefined (disconnected)";
    out << "\n";
    return kExitOk;
}

inline int cmd_tc(const CliConfig& c, std::ostream& out) {
    auto cx = discretize(parse_space(c.space), c.subdivision, c.robots);
    auto h = homology(cx);
    if (c.json) {
        emit(out, betti_json(cx, h));
        return kExitOk;
    }
    if (h.b0 == 1) out << "b1=" << h.b1 << " TC=" << tc_from_betti(h.b1) << "\n";
    else out << "b0=" << h.b0 << " b1=" << h.b1 << " TC=undefined (disconnected)\n";
    return kExitOk;
}

// ---- skeleton ---------------------------------------------------------------

inline constexpr std::size_t kDumpSamples = 33;

inline int cmd_skeleton(const CliConfig& c, std::ostream& out) {
    SkeletonGraph g = skeleton_build();
    if (c.dump || c.json) {
        ordered_json vertices = ordered_json::array();
        for (std::size_t i = 0; i < g.vertex_count(); ++i) {
            auto v = static_cast<SkelVertex>(i);
            vertices.push_back({{"name", std::string(to_string(v))}, {"state", encode_state(vertex_state(v))}});
        }
        ordered_json edges = ordered_json::array();
        for (const auto& e : g.edges()) {
            ordered_json samples = ordered_json::array();
            for (const auto& x : g.sample_edge(e.id, kDumpSamples)) samples.push_back(encode_state(x));
            edges.push_back({{"name", std::string(e.name)},
                             {"from", std::string(to_string(e.lo))},
                             {"to", std::string(to_string(e.hi))},
                             {"length", 1.0},
                             {"samples", std::move(samples)}});
        }
        emit(out, ordered_json{{"vertices", std::move(vertices)},
                               {"edges", std::move(edges)},
                               {"components", g.components()},
                               {"b1", g.betti1()}});
        return kExitOk;
    }
    out << "vertices=" << g.vertex_count() << " edges=" << g.edge_count() << " components=" << g.components()
        << " b1=" << g.betti1() << "\n";
    for (const auto& e : g.edges())
        out << "  " << e.name << ": " << to_string(e.lo) << " - " << to_string(e.hi) << "\n";
    return kExitOk;
}

// ---- oracle-path ------------------------------------------------------------

inline NodePair parse_node_pair(const std::string& text) {
    int p = 0, q = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d%c", &p, &q, &tail) != 2)
        throw Error(ErrorCode::ParseError, "expected a node pair 'p,q', got '" + text + "'");
    return {p, q};
}

inline int cmd_oracle_path(const CliConfig& c, std::ostream& out) {
    auto cx = discretize(parse_space(c.space), c.subdivision, 2);
    auto path = oracle_path(cx, parse_node_pair(c.from), parse_node_pair(c.to));
    if (c.json) {
        ordered_json j{{"reachable", path.has_value()}};
        if (path) {
            ordered_json moves = ordered_json::array();
            for (auto [p, q] : *path) moves.push_back({p, q});
            j["moves"] = path->size();
            j["path"] = std::move(moves);
        }
        emit(out, j);
        return kExitOk;
    }
    if (!path) {
        out << "Unreachable\n";
        return kExitOk;
    }
    out << "moves=" << path->size() << "\n";
    for (auto [p, q] : *path)
        out << "  (" << p << "," << q << ") " << encode_state(node_state(cx, {p, q})) << "\n";
    return kExitOk;
}

// ---- render -----------------------------------------------------------------

inline RenderSpec parse_render_spec(const CliConfig& c) {
    RenderSpec spec;
    spec.frames = c.frames;
    char tail = 0;
    if (std::sscanf(c.size.c_str(), "%dx%d%c", &spec.width, &spec.height, &tail) != 2)
        throw Error(ErrorCode::ParseError, "expected --size WIDTHxHEIGHT, got '" + c.size + "'");
    return spec;
}

inline int cmd_render(const CliConfig& c, std::ostream& out) {
    RenderSpec spec = parse_render_spec(c);
    PlanParams params = plan_params(c);
    Plan p = load_plan(c.plan_path);
    TrajectoryFile traj = resample(p, std::max<std::size_t>(spec.frames, 2), params);
    if (!c.trajectory_path.empty()) tcrobots::detail::write_text(c.trajectory_path, write_trajectory_json(traj));
    if (!c.csv_path.empty()) tcrobots::detail::write_text(c.csv_path, write_trajectory_csv(traj));
    auto files = render_frames(traj, spec, c.out.empty() ? std::string("frames") : c.out);
    if (c.json) {
        emit(out, ordered_json{{"frames", files.size()}, {"files", files}});
    } else {
        out << "wrote " << files.size() << " frames to " << (c.out.empty() ? "frames" : c.out) << "\n";
    }
    return kExitOk;
}

// ---- verify -----------------------------------------------------------------

inline ordered_json regions_json(const std::set<RegionLabel>& regions) {
    ordered_json j = ordered_json::array();
    for (RegionLabel r : regions) j.push_back(std::string(to_string(r)));
    return j;
}

inline bool verify_plans(const CliConfig& c, const PlanParams& params, ordered_json& report) {
    struct Case {
        SpaceKind space;
        int robots;
        std::size_t expected_regions;
    };
    const Case cases[] = {{SpaceKind::Lollipop, 2, 3},
                          {SpaceKind::Circle, 2, 2},
                          {SpaceKind::Circle, 1, 2},
                          {SpaceKind::Interval, 1, 1},
                          {SpaceKind::Interval, 2, 1}};
    bool ok = true;
    ordered_json runs = ordered_json::array();
    for (const auto& k : cases) {
        PlanSuiteResult r = plan_suite(k.space, k.robots, c.trials, c.seed, params);
        bool pass = r.violations == 0 && r.regions.size() == k.expected_regions;
        ok = ok && pass;
        runs.push_back({{"space", std::string(to_string(k.space))},
                        {"robots", k.robots},
                        {"trials", r.trials},
                        {"violations", r.violations},
                        {"regions", regions_json(r.regions)},
                        {"expected_region_count", k.expected_regions},
                        {"failures", r.failures},
                        {"pass", pass}});
    }
    std::size_t accepted = swap_acceptances(std::min<std::size_t>(c.trials, 1000), c.seed, params);
    ok = ok && accepted == 0;
    report["plans"] = {{"runs", std::move(runs)}, {"interval_swaps_accepted", accepted}, {"pass", ok}};
    return ok;
}

inline constexpr double kWithinJumpCap = 0.1;
inline constexpr double kWitnessJumpFloor = 0.2;

inline ordered_json probe_json(const std::string& name, const ProbeResult& r) {
    ordered_json within = ordered_json::object();
    for (const auto& [label, stats] : r.within)
        within[std::string(to_string(label))] = {
            {"compared", stats.compared}, {"max_jump", stats.max_jump}, {"mean_jump", stats.mean_jump}};
    ordered_json witnesses = ordered_json::array();
    for (const auto& w : r.witnesses) {
        const int robots = w.pair.base.robots;
        witnesses.push_back({{"start", encode_state(w.pair.base.start, robots)},
                             {"goal", encode_state(w.pair.base.goal, robots)},
                             {"perturbed_start", encode_state(w.pair.perturbed.start, robots)},
                             {"perturbed_goal", encode_state(w.pair.perturbed.goal, robots)},
                             {"regions", {std::string(to_string(w.base_region)), std::string(to_string(w.perturbed_region))}},
                             {"routes", {w.base_route, w.perturbed_route}},
                             {"jump", w.jump}});
    }
    return {{"probe", name},
            {"within", std::move(within)},
            {"max_jump", r.max_jump()},
            {"mean_jump", r.mean_jump()},
            {"witness_count", r.witness_count},
            {"max_witness_jump", r.max_witness_jump()},
            {"top_witnesses", std::move(witnesses)}};
}

inline bool verify_continuity(const CliConfig& c, const PlanParams& params, ordered_json& report) {
    const double delta = 1e-3;
    const std::size_t trials = std::max<std::size_t>(1, c.trials / 10);
    struct Probe {
        std::string name;
        ProbeSampler sampler;
        bool needs_witness;
    };
    const std::vector<Probe> probes = {
        {"lollipop/uniform", uniform_pair_sampler(SpaceKind::Lollipop, 2), false},
        {"lollipop/v2-within", lollipop_v2_within_sampler(), false},
        {"lollipop/v2-v3-boundary", lollipop_boundary_sampler(), true},
        {"circle-2/uniform", uniform_pair_sampler(SpaceKind::Circle, 2), false},
        {"circle-2/antipodal-within", circle_u_within_sampler(2), false},
        {"circle-2/antipodal-boundary", circle_boundary_sampler(2), true},
        {"circle-1/uniform", uniform_pair_sampler(SpaceKind::Circle, 1), false},
        {"circle-1/antipodal-boundary", circle_boundary_sampler(1), true},
        {"interval-1/uniform", uniform_pair_sampler(SpaceKind::Interval, 1), false},
        {"interval-2/uniform", uniform_pair_sampler(SpaceKind::Interval, 2), false},
    };
    bool ok = true;
    ordered_json runs = ordered_json::array();
    for (const auto& p : probes) {
        ProbeResult r = continuity_probe(p.sampler, delta, trials, c.seed, params);
        bool pass = r.max_jump() <= kWithinJumpCap && (!p.needs_witness || r.max_witness_jump() >= kWitnessJumpFloor);
        ok = ok && pass;
        ordered_json j = probe_json(p.name, r);
        j["pass"] = pass;
        runs.push_back(std::move(j));
    }
    report["continuity"] = {{"delta", delta}, {"trials_per_probe", trials}, {"runs", std::move(runs)}, {"pass", ok}};
    return ok;
}

inline bool verify_retraction(const CliConfig& c, const PlanParams& params, ordered_json& report) {
    JumpStats s = retraction_continuity(std::min<std::size_t>(c.trials, 1000), 1e-4, c.seed, params.flow);
    bool ok = s.max <= 0.05 && s.mean <= 1e-3;
    ordered_json families = ordered_json::array();
    for (const auto& f : junction_families(1e-3, params.flow)) {
        bool pass = f.worst <= 0.02;
        ok = ok && pass;
        families.push_back({{"family", f.name}, {"worst", f.worst}, {"pass", pass}});
    }
    report["retraction"] = {{"trials", s.trials},
                            {"delta", 1e-4},
                            {"max", s.max},
                            {"mean", s.mean},
                            {"junction_families", std::move(families)},
                            {"pass", ok}};
    return ok;
}

inline bool verify_homology(const CliConfig& c, const PlanParams& params, ordered_json& report) {
    struct Expect {
        SpaceKind space;
        std::size_t b0;
        long b1;
    };
    const Expect expects[] = {{SpaceKind::Interval, 2, 0}, {SpaceKind::Circle, 1, 1}, {SpaceKind::Lollipop, 1, 3}};
    bool ok = true;
    ordered_json runs = ordered_json::array();
    for (const auto& e : expects) {
        for (int n : {6, 8, 12}) {
            auto cx = discretize(e.space, n);
            auto h = homology(cx);
            bool pass = h.b0 == e.b0 && h.b1 == e.b1;
            ok = ok && pass;
            ordered_json j = betti_json(cx, h);
            j["space"] = std::string(to_string(e.space));
            j["subdivision"] = n;
            j["pass"] = pass;
            runs.push_back(std::move(j));
        }
    }
    long skeleton_b1 = skeleton_build().betti1();
    long complex_b1 = homology(discretize(SpaceKind::Lollipop, c.subdivision)).b1;
    bool agree = skeleton_b1 == complex_b1;
    ok = ok && agree;
    ordered_json oracle = ordered_json::object();
    const std::size_t oracle_trials = std::min<std::size_t>(c.trials, 1000);
    for (SpaceKind s : {SpaceKind::Interval, SpaceKind::Circle, SpaceKind::Lollipop}) {
        std::size_t bad = oracle_disagreements(s, c.subdivision, oracle_trials, c.seed, params);
        ok = ok && bad == 0;
        oracle[std::string(to_string(s))] = bad;
    }
    report["homology"] = {{"runs", std::move(runs)},
                          {"skeleton_b1", skeleton_b1},
                          {"complex_b1", complex_b1},
                          {"oracle_trials", oracle_trials},
                          {"oracle_disagreements", std::move(oracle)},
                          {"pass", ok}};
    return ok;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out) {
    PlanParams params = plan_params(c);
    ordered_json report{{"seed", c.seed}, {"trials", c.trials}};
    bool ok = true;
    const bool all = c.suite == "all";
    if (all || c.suite == "homology") ok = verify_homology(c, params, report) && ok;
    if (all || c.suite == "plans") ok = verify_plans(c, params, report) && ok;
    if (all || c.suite == "retraction") ok = verify_retraction(c, params, report) && ok;
    if (all || c.suite == "continuity") ok = verify_continuity(c, params, report) && ok;
    report["pass"] = ok;
    emit(out, report);
    return ok ? kExitOk : kExitVerification;
}

} // namespace detail

inline constexpr const char* kHelpFooter =
    "Points: \"I:<t>\" on the interval (t=0 free end, t=1 junction) or \"C:<t>\" on the circle\n"
    "(t in [0,1), counterclockwise from the junction). A two-robot configuration is \"a,b\".\n"
    "Exit codes: 0 success, 2 planner refusal (SwapImpossible), 3 input error,\n"
    "4 verification failure. Errors go to stderr as error[Identifier]: message.";

/// Parses argv and runs one subcommand; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliConfig c;
    CLI::App app{"Two robots on a track: motion planning, retraction and homology checks", "tcrobots"};
    app.footer(kHelpFooter);
    app.require_subcommand(1);

    const std::vector<std::string> spaces{"interval", "circle", "lollipop"};
    auto add_space = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--space", c.space, "interval | circle | lollipop")->check(CLI::IsMember(spaces));
        if (required) o->required();
    };
    auto add_flow = [&](CLI::App* sub) {
        sub->add_option("--kappa", c.kappa, "junction damping slope")->capture_default_str();
        sub->add_option("--step", c.step, "sample spacing (arc length)")->capture_default_str();
        sub->add_option("--tol-antipodal", c.tol_antipodal, "classification tolerance")->capture_default_str();
    };

    auto* plan_cmd = app.add_subcommand("plan", "plan a path between two configurations");
    add_space(plan_cmd, true);
    plan_cmd->add_option("--robots", c.robots, "1 or 2")->check(CLI::Range(1, 2))->capture_default_str();
    plan_cmd->add_option("--start", c.start, "start configuration")->required();
    plan_cmd->add_option("--goal", c.goal, "goal configuration")->required();
    plan_cmd->add_option("--out", c.out, "write plan JSON to this file");
    plan_cmd->add_flag("--json", c.json, "print plan JSON");
    add_flow(plan_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "run property suites and print a JSON report");
    verify_cmd->add_option("--suite", c.suite, "plans | continuity | homology | retraction | all")
        ->check(CLI::IsMember({"plans", "continuity", "homology", "retraction", "all"}))
        ->capture_default_str();
    verify_cmd->add_option("--trials", c.trials, "random trials per suite")->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify_cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    verify_cmd->add_option("--subdivision", c.subdivision, "subdivision for the discrete oracle")
        ->check(CLI::Range(kMinSubdivision, 64))
        ->capture_default_str();
    verify_cmd->add_flag("--json", c.json, "accepted for symmetry; the report is always JSON");
    add_flow(verify_cmd);

    auto* betti_cmd = app.add_subcommand("betti", "Betti numbers of the discretized configuration space");
    add_space(betti_cmd, true);
    betti_cmd->add_option("--subdivision", c.subdivision, "nodes per unit edge")
        ->check(CLI::Range(kMinSubdivision, 64))
        ->capture_default_str();
    betti_cmd->add_option("--robots", c.robots, "1 or 2")->check(CLI::Range(1, 2))->capture_default_str();
    betti_cmd->add_flag("--json", c.json, "print JSON");

    auto* tc_cmd = app.add_subcommand("tc", "topological complexity from the first Betti number");
    add_space(tc_cmd, true);
    tc_cmd->add_option("--subdivision", c.subdivision, "nodes per unit edge")
        ->check(CLI::Range(kMinSubdivision, 64))
        ->capture_default_str();
    tc_cmd->add_option("--robots", c.robots, "1 or 2")->check(CLI::Range(1, 2))->capture_default_str();
    tc_cmd->add_flag("--json", c.json, "print JSON");

    auto* skeleton_cmd = app.add_subcommand("skeleton", "the half-unit skeleton of the lollipop");
    skeleton_cmd->add_flag("--dump", c.dump, "print vertices, edges and edge samples as JSON");
    skeleton_cmd->add_flag("--json", c.json, "same as --dump");

    auto* oracle_cmd = app.add_subcommand("oracle-path", "fewest-move path in the discrete configuration space");
    add_space(oracle_cmd, true);
    oracle_cmd->add_option("--subdivision", c.subdivision, "nodes per unit edge")
        ->check(CLI::Range(kMinSubdivision, 64))
        ->capture_default_str();
    oracle_cmd->add_option("--from", c.from, "start node pair p,q")->required();
    oracle_cmd->add_option("--to", c.to, "goal node pair p,q")->required();
    oracle_cmd->add_flag("--json", c.json, "print JSON");

    auto* render_cmd = app.add_subcommand("render", "render a plan as SVG frames");
    render_cmd->add_option("--plan", c.plan_path, "plan JSON file")->required();
    render_cmd->add_option("--frames", c.frames, "frame count")->check(CLI::Range(1, 100000))->capture_default_str();
    render_cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    render_cmd->add_option("--size", c.size, "canvas WIDTHxHEIGHT")->capture_default_str();
    render_cmd->add_option("--trajectory", c.trajectory_path, "also write the resampled trajectory JSON");
    render_cmd->add_option("--csv", c.csv_path, "also write the resampled trajectory CSV");
    render_cmd->add_flag("--json", c.json, "print the written file list as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error[InvalidArgument]: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        if (plan_cmd->parsed()) return detail::cmd_plan(c, out);
        if (verify_cmd->parsed()) return detail::cmd_verify(c, out);
        if (betti_cmd->parsed()) return detail::cmd_betti(c, out);
        if (tc_cmd->parsed()) return detail::cmd_tc(c, out);
        if (skeleton_cmd->parsed()) return detail::cmd_skeleton(c, out);
        if (oracle_cmd->parsed()) return detail::cmd_oracle_path(c, out);
        if (render_cmd->parsed()) return detail::cmd_render(c, out);
    } catch (const Error& e) {
        std::string msg = e.what();
        std::string prefix = std::string(to_string(e.code())) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        err << "error[" << to_string(e.code()) << "]: " << msg << "\n";
        return exit_code_for(e.code());
    }
    return kExitInternal;
}

} // namespace tcrobots::cli
