#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pwhs/config.hpp"
#include "pwhs/verify.hpp"

using namespace pwhs;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch() {
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("pwhs_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    auto out = scratch() / "stdout", err = scratch() / "stderr";
    std::string cmd = std::string(PWHS_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string config(const std::string& name) { return (fs::path(PWHS_CONFIG_DIR) / name).string(); }

fs::path write_config(const std::string& name, const std::string& text) {
    auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (!line.empty() && line.back() == ',') row.push_back("");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST(Config, ParsesZonesAndPerturbation) {
    auto rc = parse_config(parse_json_text(R"({
        "partition": "external",
        "zones": {"plus": {"type": "monomial", "n": 3, "scale": [0, 2]},
                  "central": {"type": "rational_normal", "n": 2, "c": 1},
                  "minus": {"type": "reciprocal_poly", "coefficients": [[1, 0], [0, 1]]}},
        "perturbation": {"epsilon": 0.1, "ell": 2, "minus": {"a": [1, 2], "b": [0, 0, 3]}}})"));
    EXPECT_EQ(rc.partition, PartitionKind::ExternalCircles);
    EXPECT_NEAR(std::abs(eval_field(rc.fields[0], I) - 2.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(rc.epsilon, 0.1);
    ASSERT_TRUE(rc.perturbation);
    EXPECT_EQ(rc.perturbation->A(Zone::Minus, 1), 2.0);
    EXPECT_EQ(rc.perturbation->B(Zone::Minus, 2), 3.0);
    auto sys = rc.system();
    EXPECT_EQ(sys.perturbation[2].degree(), 2);
}

TEST(Config, ErrorsNameTheField) {
    auto expect_msg = [](const std::string& text, const std::string& needle) {
        try {
            parse_config(parse_json_text(text));
            FAIL() << "accepted " << text;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_msg(R"({"perturbation": {"epsilon": -1}})", "perturbation.epsilon");
    expect_msg(R"({"partition": "hexagon"})", "partition");
    expect_msg(R"({"zones": {"plus": {"type": "monomial", "n": 1}, "central": {"type": "warp"}, "minus": {"type": "monomial", "n": 1}}})",
               "zones.central.type");
    expect_msg(R"({"zones": {"plus": {"type": "monomial", "n": 1.5}}})", "zones.plus.n");
    expect_msg(R"({"zones": {"plus": {"type": "monomial", "n": 1}}})", "zones.central");
    expect_msg(R"({"perturbation": {"ell": 1, "plus": {"a": [1, 2, 3]}}})", "perturbation.plus.a");
    expect_msg("{not json", "not valid JSON");
}

TEST(Config, Maps) {
    Json j = parse_json_text(R"({"m": {"a": [1, 0], "b": 0, "c": 0, "d": [0, 1]}, "n": "internal", "bad": {"a": 1, "b": 2, "c": 2, "d": 4}})");
    ConfigNode root(j, "");
    EXPECT_EQ(map_from_json(root["m"]).d, I);
    EXPECT_EQ(map_from_json(root["n"]).a, -2.0 * I);
    EXPECT_THROW(map_from_json(root["bad"]), DegenerateMap);
}

TEST(Cli, NegativeEpsilonExitsOne) {
    auto p = write_config("neg.json", R"({"perturbation": {"epsilon": -0.5}})");
    auto r = run("simulate --config " + p.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("perturbation.epsilon"), std::string::npos) << r.err;
}

TEST(Cli, MissingConfigExitsOne) {
    EXPECT_EQ(run("simulate --config /nonexistent/pwhs.json").code, 1);
    EXPECT_NE(run("simulate").code, 0);
}

TEST(Cli, SimulateStripFixedPointCloses) {
    auto r = run("simulate --config " + config("strip_linear_centers.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(r.out);
    ASSERT_GT(rows.size(), 3u);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,re,im,zone,event_flag");
    const auto& first = rows[1];
    const auto& last = rows.back();
    EXPECT_EQ(last[4], "1");
    double dx = std::stod(last[1]) - std::stod(first[1]), dy = std::stod(last[2]) - std::stod(first[2]);
    EXPECT_LE(std::hypot(dx, dy), 1e-5);
    int events = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) events += rows[i][4] == "1";
    EXPECT_EQ(events, 4);
}

TEST(Cli, SimulateGlobalCenterIsACircle) {
    auto r = run("simulate --config " + config("global_center.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_NEAR(std::hypot(std::stod(rows[i][1]), std::stod(rows[i][2])), 1.0, 1e-8);
    EXPECT_NEAR(std::stod(rows.back()[1]), 1.0, 1e-8);
}

TEST(Cli, SimulateSlidingExitsTwo) {
    auto p = write_config("slide.json", R"({"zones": {"plus": {"type": "monomial", "n": 1, "scale": [0, -1]},
        "central": {"type": "monomial", "n": 1, "scale": [0, 1]}, "minus": {"type": "monomial", "n": 1, "scale": [0, 1]}},
        "simulate": {"start": [2, 0]}})");
    auto r = run("simulate --config " + p.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("sliding"), std::string::npos);
    EXPECT_GT(csv_rows(r.out).size(), 2u);
}

TEST(Cli, PortraitGrid) {
    auto r = run("portrait --config " + config("global_center.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(r.out);
    EXPECT_EQ(rows.size(), 1u + 31 * 31);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x,y,zone,H,vx,vy");
}

TEST(Cli, MelnikovZeroCoefficients) {
    auto out = scratch() / "m0.csv";
    auto r = run("melnikov --config " + config("melnikov_strip_zero.json") + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    auto rows = csv_rows(slurp(out));
    ASSERT_EQ(rows.size(), 51u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][1]), 0.0);
    auto rep = Json::parse(r.out);
    EXPECT_EQ(rep["simple_zeros"], 0);
}

TEST(Cli, MelnikovTargetsGiveZeros) {
    for (auto [name, want] : {std::pair{"melnikov_strip_targets.json", 4}, std::pair{"melnikov_internal_outer_targets.json", 8}}) {
        auto out = scratch() / "m.csv";
        auto r = run(std::string("melnikov --config ") + config(name) + " --out " + out.string());
        ASSERT_EQ(r.code, 0) << r.err;
        auto rep = Json::parse(r.out);
        EXPECT_GE(rep["simple_zeros"].get<int>(), want) << name;
        for (const auto& t : rep["targets"]) {
            double best = INFINITY;
            for (const auto& z : rep["zeros"]) best = std::min(best, std::abs(z.get<double>() - t.get<double>()));
            EXPECT_LE(best, 1e-5) << name;
        }
    }
}

TEST(Cli, MelnikovDomainViolationExitsOne) {
    auto p = write_config("dom.json", R"({"melnikov": {"basis": "internal_inner", "r_min": 1.5, "r_max": 4}})");
    EXPECT_EQ(run("melnikov --config " + p.string()).code, 1);
    auto q = write_config("basis.json", R"({"melnikov": {"basis": "hexagon"}})");
    auto r = run("melnikov --config " + q.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("melnikov.basis"), std::string::npos);
}

TEST(Cli, CyclesReports) {
    struct Case {
        const char* file;
        std::size_t candidates;
        int valid;
    };
    for (auto c : {Case{"cycles_strip_linear.json", 1, 1}, Case{"cycles_strip_quadratic.json", 3, 2},
                   Case{"cycles_internal_circles.json", 0, 2}}) {
        auto r = run(std::string("cycles --config ") + config(c.file));
        ASSERT_EQ(r.code, 0) << r.err;
        auto rep = Json::parse(r.out);
        EXPECT_EQ(rep["valid_cycles"].get<int>(), c.valid) << c.file;
        if (c.candidates) {
            EXPECT_EQ(rep["candidates"].size(), c.candidates) << c.file;
        }
        for (const auto& cand : rep["candidates"]) {
            if (!cand["valid"].get<bool>()) continue;
            ASSERT_TRUE(cand["closure"].is_number()) << c.file;
            EXPECT_LE(cand["closure"].get<double>(), 1e-5) << c.file;
            EXPECT_EQ(cand["crossings"].size(), 4u);
        }
    }
    auto rep = Json::parse(run(std::string("cycles --config ") + config("cycles_strip_linear.json")).out);
    EXPECT_NEAR(rep["candidates"][0]["s1"].get<double>(), -1.652018966, 1e-8);
    EXPECT_NEAR(rep["candidates"][0]["t1"].get<double>(), -1.054037933, 1e-8);
    EXPECT_EQ(rep["bezout_bound"], 1);
}

TEST(Cli, CyclesUnsupportedZoneFormExitsOne) {
    auto p = write_config("unsup.json", R"({"zones": {"plus": {"type": "monomial", "n": 1, "scale": [0, 1]},
        "central": {"type": "monomial", "n": 1, "scale": [0, 1]}, "minus": {"type": "monomial", "n": 1, "scale": [0, 1]}}})");
    auto r = run("cycles --config " + p.string());
    EXPECT_EQ(r.code, 1);
    auto q = write_config("focus.json", R"({"partition": "internal",
        "zones": {"plus": {"type": "linear_center", "lambda": [0, 1], "center": [-0.2, -0.6]},
                  "central": {"type": "linear_center", "lambda": [-0.1, -1], "center": [1, 1]},
                  "minus": {"type": "linear_center", "lambda": [0, 1], "center": [-0.6, -0.4]}}})");
    r = run("cycles --config " + q.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("zones.central.lambda"), std::string::npos) << r.err;
}

TEST(Cli, TransformEmitsMappedSystem) {
    auto r = run("transform --config " + config("transform_strip_to_external.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto out = Json::parse(r.out);
    EXPECT_EQ(out["partition"], "external");
    // the output is itself a valid config with the mapped central field -i(w - 1)
    auto rc = parse_config(out);
    Complex w(0.4, -0.3);
    EXPECT_LE(std::abs(eval_field(rc.fields[1], w) - (-I * (w - 1.0))), 1e-12);
}

TEST(Cli, Deterministic) {
    auto a = run("cycles --config " + config("cycles_strip_quadratic.json"));
    auto b = run("cycles --config " + config("cycles_strip_quadratic.json"));
    EXPECT_EQ(a.out, b.out);
    auto c = run("simulate --config " + config("strip_linear_centers.json"));
    auto d = run("simulate --config " + config("strip_linear_centers.json"));
    EXPECT_EQ(c.out, d.out);
}

TEST(Cli, VerifyReport) {
    auto r = run("verify");
    auto rep = Json::parse(r.out);
    ASSERT_EQ(rep["checks"].size(), 8u);
    EXPECT_EQ(r.code, rep["pass"].get<bool>() ? 0 : 1);
    // item text carries timings just as bounds, so two runs agree byte for byte
    EXPECT_EQ(run("verify").out, r.out);
}

TEST(Verify, InjectedSignErrorIsCaught) {
    verify::Hooks bad;
    bad.closed = [](BasisName b, const PerturbationCoeffs& p, double r) { return -melnikov_closed(b, p, r); };
    auto w = verify::wronskians();
    auto good = verify::melnikov_consistency();
    auto broken = verify::melnikov_consistency(bad);
    EXPECT_TRUE(good.pass);
    EXPECT_FALSE(broken.pass);
    // the Wronskian check does not depend on the closed series
    EXPECT_EQ(verify::wronskians().pass, w.pass);
    int strip_items_ok = 0;
    for (const auto& it : w.items) strip_items_ok += it.pass;
    EXPECT_GE(strip_items_ok, 3);
}
