#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "tcrobots/cli.hpp"

using namespace tcrobots;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tcrobots");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("tcrobots_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST(Cli, TopologicalComplexity) {
    Outcome r = run_cli({"tc", "--space", "lollipop"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "b1=3 TC=3\n");
    EXPECT_EQ(run_cli({"tc", "--space", "circle"}).out, "b1=1 TC=2\n");
    EXPECT_EQ(run_cli({"tc", "--space", "interval", "--robots", "1"}).out, "b1=0 TC=1\n");
    EXPECT_NE(run_cli({"tc", "--space", "interval"}).out.find("disconnected"), std::string::npos);
}

TEST(Cli, Betti) {
    Outcome r = run_cli({"betti", "--space", "lollipop", "--subdivision", "8"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "V=240 E=448 F=206 chi=-2 b0=1 b1=3 TC=3\n");
    auto j = nlohmann::json::parse(run_cli({"betti", "--space", "circle", "--json"}).out);
    EXPECT_EQ(j["b0"], 1);
    EXPECT_EQ(j["b1"], 1);
    EXPECT_EQ(j["tc"], 2);
    auto i = nlohmann::json::parse(run_cli({"betti", "--space", "interval", "--json"}).out);
    EXPECT_EQ(i["b0"], 2);
    EXPECT_TRUE(i["tc"].is_null());
}

TEST(Cli, SwapOnIntervalExitsTwo) {
    Outcome r = run_cli({"plan", "--space", "interval", "--robots", "2", "--start", "I:0.1,I:0.6", "--goal", "I:0.7,I:0.2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error[SwapImpossible]"), std::string::npos);
    EXPECT_EQ(r.err.find("SwapImpossible: "), std::string::npos);
}

TEST(Cli, InputErrorsExitThree) {
    EXPECT_EQ(run_cli({"plan", "--space", "lollipop", "--start", "Q:0.3,C:0.5", "--goal", "I:0.1,C:0.5"}).code, 3);
    EXPECT_EQ(run_cli({"plan", "--space", "lollipop", "--start", "I:0.3,I:0.3", "--goal", "I:0.1,C:0.5"}).code, 3);
    EXPECT_EQ(run_cli({"plan", "--space", "torus", "--start", "I:0.3,C:0.5", "--goal", "I:0.1,C:0.5"}).code, 3);
    EXPECT_EQ(run_cli({"plan", "--space", "lollipop", "--robots", "1", "--start", "I:0.3", "--goal", "C:0.5"}).code, 3);
    EXPECT_EQ(run_cli({"betti", "--space", "lollipop", "--subdivision", "3"}).code, 3);
    EXPECT_EQ(run_cli({"oracle-path", "--space", "lollipop", "--from", "1,x", "--to", "2,3"}).code, 3);
    EXPECT_EQ(run_cli({"render", "--plan", "/nonexistent/plan.json"}).code, 3);
    EXPECT_EQ(run_cli({}).code, 3);
}

TEST(Cli, PlanText) {
    Outcome r = run_cli({"plan", "--space", "circle", "--start", "C:0,C:0.25", "--goal", "C:0.25,C:0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("region: CircleV"), std::string::npos);
    EXPECT_NE(r.out.find("route: cw"), std::string::npos);
    EXPECT_NE(r.out.find("validation: ok"), std::string::npos);
}

TEST(Cli, PlanJsonParsesAndRoundTrips) {
    Outcome r = run_cli({"plan", "--space", "lollipop", "--start", "I:0.2,C:0.25", "--goal", "C:0.1,C:0.6", "--json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["steps"].size(), 3u);
    Plan p = read_plan_json(r.out);
    EXPECT_TRUE(validate_plan(p, p.query).ok());
}

TEST(Cli, PlanFileIsDeterministic) {
    fs::path a = scratch("a.json"), b = scratch("b.json");
    std::vector<std::string> args{"plan", "--space", "lollipop", "--start", "I:0.2,C:0.25", "--goal", "C:0.1,C:0.6", "--out"};
    auto with = [&](const fs::path& p) {
        auto v = args;
        v.push_back(p.string());
        return v;
    };
    ASSERT_EQ(run_cli(with(a)).code, 0);
    ASSERT_EQ(run_cli(with(b)).code, 0);
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
    fs::remove(a);
    fs::remove(b);
}

TEST(Cli, SkeletonDump) {
    Outcome r = run_cli({"skeleton", "--dump"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["vertices"].size(), 6u);
    ASSERT_EQ(j["edges"].size(), 8u);
    EXPECT_EQ(j["b1"], 3);
    for (const auto& e : j["edges"]) {
        ASSERT_EQ(e["samples"].size(), 33u);
        for (const auto& s : e["samples"]) {
            ConfigState x = parse_state(s.get<std::string>());
            ASSERT_NEAR(separation(SpaceKind::Lollipop, x), 0.5, 1e-12);
        }
    }
    EXPECT_EQ(run_cli({"skeleton"}).out.rfind("vertices=6 edges=8 components=1 b1=3\n", 0), 0u);
}

TEST(Cli, OraclePath) {
    EXPECT_EQ(run_cli({"oracle-path", "--space", "interval", "--from", "0,4", "--to", "4,0"}).out, "Unreachable\n");
    Outcome r = run_cli({"oracle-path", "--space", "lollipop", "--from", "0,4", "--to", "4,0", "--json"});
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["reachable"].get<bool>());
    EXPECT_EQ(j["path"].back(), nlohmann::json::array({4, 0}));
    EXPECT_EQ(run_cli({"oracle-path", "--space", "lollipop", "--from", "2,5", "--to", "2,5"}).out, "moves=0\n");
}

TEST(Cli, RenderIsDeterministic) {
    fs::path plan = scratch("plan.json"), one = scratch("one"), two = scratch("two"), csv = scratch("t.csv");
    ASSERT_EQ(run_cli({"plan", "--space", "lollipop", "--start", "I:0.2,C:0.25", "--goal", "C:0.1,C:0.6", "--out",
                       plan.string()})
                  .code,
              0);
    Outcome r = run_cli({"render", "--plan", plan.string(), "--frames", "4", "--out", one.string(), "--size", "640x320",
                         "--csv", csv.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(run_cli({"render", "--plan", plan.string(), "--frames", "4", "--out", two.string(), "--size", "640x320"}).code,
              0);
    for (const char* f : {"frame_0000.svg", "frame_0003.svg"}) {
        EXPECT_FALSE(slurp(one / f).empty());
        EXPECT_EQ(slurp(one / f), slurp(two / f));
    }
    EXPECT_FALSE(fs::exists(one / "frame_0004.svg"));
    EXPECT_EQ(slurp(csv).rfind("t,a,b\n", 0), 0u);
    EXPECT_EQ(run_cli({"render", "--plan", plan.string(), "--size", "big", "--out", one.string()}).code, 3);
    for (const auto& p : {plan, one, two, csv}) fs::remove_all(p);
}

TEST(Cli, VerifyReportsJson) {
    Outcome r = run_cli({"verify", "--suite", "homology", "--trials", "50"});
    EXPECT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.is_object());
    Outcome p = run_cli({"verify", "--suite", "plans", "--trials", "100", "--seed", "5"});
    EXPECT_EQ(p.code, 0) << p.out;
    EXPECT_EQ(p.out, run_cli({"verify", "--suite", "plans", "--trials", "100", "--seed", "5"}).out);
}

TEST(Cli, HelpDocumentsEncodingAndExitCodes) {
    Outcome r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("I:"), std::string::npos);
    EXPECT_NE(r.out.find("exit"), std::string::npos);
}
