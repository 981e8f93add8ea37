#include "ebb/cli.hpp"
#include "ebb/config.hpp"
#include "ebb/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace ebb;
using nlohmann::json;

namespace {

const std::string kData = EBB_TEST_DATA_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, const std::string& sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    for (;;) {
        const auto next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) return parts;
        pos = next + sep.size();
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Same rows and columns; numeric fields equal to 1e-9 relative, text fields exactly.
void check_golden(const std::string& actual, const std::string& golden_file) {
    const auto expected = slurp(kData + "/../golden/" + golden_file);
    REQUIRE_FALSE(expected.empty());
    const auto a = split(actual, "\r\n"), e = split(expected, "\r\n");
    REQUIRE(a.size() == e.size());
    CHECK(a[0] == e[0]);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const auto fa = split(a[i], ","), fe = split(e[i], ",");
        REQUIRE(fa.size() == fe.size());
        for (std::size_t k = 0; k < fa.size(); ++k) {
            char* end_a = nullptr;
            char* end_e = nullptr;
            const double va = std::strtod(fa[k].c_str(), &end_a), ve = std::strtod(fe[k].c_str(), &end_e);
            const bool numeric = !fe[k].empty() && *end_e == '\0' && *end_a == '\0';
            if (numeric && std::isfinite(ve)) {
                INFO(golden_file << " row " << i << " col " << e[0]);
                CHECK(std::abs(va - ve) <= 1e-9 * std::max(1.0, std::abs(ve)));
            } else {
                CHECK(fa[k] == fe[k]);
            }
        }
    }
}

}  // namespace

TEST_CASE("built-in scenario reports the gap eigenvector") {
    const auto r = run({"scenario", "remark2", "--lambda", "1", "--nu", "1"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["residual"].get<double>() <= 1e-10);
    CHECK(std::abs(j["weight_estimate"].get<double>() - 1.0 / 3.0) <= 1e-4);
    CHECK(std::abs(j["point_mass"].get<double>() - 1.0 / 3.0) <= 1e-4);
}

TEST_CASE("certify on the scalar model certifies the whole grid") {
    const auto r = run({"certify", "--config", kData + "/scalar_model.json", "--format", "json", "--strict"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    const auto& c = j["certificate"];
    CHECK(c["points"].size() == 50);
    CHECK(c["certified"].get<int>() == 50);
    for (const auto& p : c["points"]) CHECK(p["verdict"] == "CERTIFIED");
}

TEST_CASE("non-Hermitian system is a field-level config error") {
    const auto r = run({"validate", "--config", kData + "/nonhermitian.json"});
    CHECK(r.code == 1);
    CHECK(r.err.find("model.system") != std::string::npos);
    CHECK(r.err.find("Hermitian") != std::string::npos);
}

TEST_CASE("usage errors") {
    const auto a = run({"frobnicate"});
    CHECK(a.code == 1);
    CHECK(a.err.find("unknown subcommand 'frobnicate'") != std::string::npos);
    CHECK(a.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == 1);
    CHECK(run({"certify"}).code == 1);  // no config
    CHECK(run({"scenario", "nope"}).code == 1);
    CHECK(run({"classify", "--config", kData + "/t2.json", "--grid", "1:2"}).code == 1);
    CHECK(run({"classify", "--config", kData + "/t2.json", "--format", "xml"}).code == 1);
    CHECK(run({"classify", "--config", kData + "/missing.json"}).code == 1);
    CHECK(run({"density", "--config", kData + "/t2.json", "--nodes", "1"}).code == 1);
    CHECK(run({"certify", "--config", kData + "/t2.json", "--eps-min", "1"}).code == 1);
    CHECK(run({"certify", "--config", kData + "/t2.json", "--out", "/nonexistent/dir/x.csv"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("strict mode flags unresolved ladders") {
    const std::vector<std::string> base{"classify", "--config", kData + "/t2.json", "--grid", "1:1:1"};
    CHECK(run(base).code == 0);
    auto strict = base;
    strict.push_back("--strict");
    CHECK(run(strict).code == 2);
}

TEST_CASE("config field errors name the field") {
    auto bad = [](const std::string& text) {
        try {
            parse_config(json::parse(text));
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(bad(R"({})").rfind("model", 0) == 0);
    CHECK(bad(R"({"model":{"preset":"nope"}})").rfind("model.preset", 0) == 0);
    CHECK(bad(R"({"model":{"preset":"remark2"},"grid":{"start":0,"stop":1,"points":0}})").rfind("grid.points", 0) == 0);
    CHECK(bad(R"({"model":{"preset":"remark2"},"tolerances":{"div_tol":-1}})").rfind("tolerances.div_tol", 0) == 0);
    CHECK(bad(R"({"model":{"preset":"remark2"},"tolerances":{"bogus":1}})").rfind("tolerances.bogus", 0) == 0);
    CHECK(bad(R"({"model":{"preset":"remark2"},"ladder":{"eps_min":1,"eps_max":0.1}})").rfind("ladder", 0) == 0);
    CHECK(bad(R"({"model":{"system":[[[0,0]]],"delta_l":[[1,0]],"delta_r":[[1,0]],
        "reservoir_l":{"pieces":[{"interval":[0,1],"poly":[-1]}]},"reservoir_r":{}}})")
              .rfind("model.reservoir_l", 0) == 0);
    CHECK(bad(R"({"model":{"system":[[[0,0]]],"delta_l":[[1,0],[0,0]],"delta_r":[[1,0]],
        "reservoir_l":{},"reservoir_r":{}}})")
              .rfind("model.delta_l", 0) == 0);
}

TEST_CASE("JSON reports re-parse under the config schema") {
    for (const char* cmd : {"validate", "classify", "density", "average", "certify", "greens"}) {
        const auto r = run({cmd, "--config", kData + "/t2.json", "--format", "json", "--grid", "-1.5:1.5:3"});
        REQUIRE(r.code == 0);
        const auto j = json::parse(r.out);
        CHECK(j["command"] == cmd);
        const RunConfig c = parse_config(j["config"]);
        CHECK(config_to_json(c) == j["config"]);
        CHECK(c.seed == 7);
        CHECK(c.grid.size() == 3);
    }
}

TEST_CASE("output is deterministic and honours --out") {
    const std::vector<std::string> args{"average", "--config", kData + "/t2.json", "--grid", "-1:1:3"};
    const auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    const std::string path = "cli_out_test.csv";
    auto with_out = args;
    with_out.insert(with_out.end(), {"--out", path});
    const auto c = run(with_out);
    CHECK(c.code == 0);
    CHECK(c.out.empty());
    CHECK(slurp(path) == a.out);
    std::remove(path.c_str());
}

TEST_CASE("CSV column contracts") {
    CHECK(cli::csv_header("certify") == std::vector<std::string>{"energy", "in_scope", "verdict", "abs_D", "aux1_lhs",
                                                                 "aux1_rhs", "aux2_lhs", "aux2_rhs",
                                                                 "sign_structure_ok", "note"});
    CHECK(cli::csv_header("density") ==
          std::vector<std::string>{"energy", "phi", "status", "density", "point_mass", "point_mass_converged"});
    const std::string t2 = kData + "/t2.json";
    check_golden(run({"certify", "--config", kData + "/scalar_model.json", "--grid", "1.1:1.9:5"}).out, "certify_scalar.csv");
    check_golden(run({"classify", "--config", t2}).out, "classify_t2.csv");
    check_golden(run({"density", "--config", t2, "--grid", "-1.5:1.5:3"}).out, "density_t2.csv");
    check_golden(run({"average", "--config", t2, "--grid", "-1.5:1.5:3"}).out, "average_t2.csv");
    check_golden(run({"greens", "--config", t2, "--grid", "0.3:0.3:1"}).out, "greens_t2.csv");
    check_golden(run({"scenario", "remark2", "--format", "csv"}).out, "scenario_scalar.csv");
    check_golden(run({"validate", "--config", t2, "--format", "csv"}).out, "validate_t2.csv");
}

TEST_CASE("CSV formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(CsvTable::quote("plain") == "plain");
    CHECK(CsvTable::quote("a,b") == "\"a,b\"");
    CHECK(CsvTable::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvTable t({"a", "b"});
    t.add_row({"1", "x,y"});
    CHECK(t.str() == "a,b\r\n1,\"x,y\"\r\n");
    CHECK_THROWS(t.add_row({"1"}));
}

TEST_CASE("grid literals") {
    CHECK(parse_grid_literal("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(parse_grid_literal("2:2:1") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_grid_literal("0:1"), ConfigError);
    CHECK_THROWS_AS(parse_grid_literal("0:1:0"), ConfigError);
    CHECK_THROWS_AS(parse_grid_literal("a:1:3"), ConfigError);
}
