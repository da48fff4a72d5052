#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "starhardy/cli.hpp"
#include "starhardy/config.hpp"

namespace cfg = starhardy::config;
namespace cli = starhardy::cli;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

fs::path test_root() {
    static fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "starhardy_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path make_dir(const std::string& name) {
    fs::path p = test_root() / name;
    fs::create_directories(p);
    return p;
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::path p = test_root() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

ordered_json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return ordered_json::parse(in);
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::string without_timestamp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream kept;
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) kept << line << '\n';
    return kept.str();
}

}  // namespace

TEST_CASE("config grammar") {
    cfg::Config c = cfg::Config::parse_string(
        "# comment\n"
        "; another comment\n"
        "top = 1\n"
        "[domain]\n"
        "kind = ellipsoid   # trailing comment\n"
        "axes = 1, 2, 2\n"
        "[rule]\n"
        "radial_levels = 40\n"
        "verify.tolerance = 1e-6\n"
        "flag = yes\n");

    CHECK(c.get("top") == "1");
    CHECK(c.get("domain.kind") == "ellipsoid");
    CHECK(c.get_int("rule.radial_levels") == 40);
    // Fully qualified keys bypass the active section.
    CHECK(c.get_double("verify.tolerance") == doctest::Approx(1e-6));
    CHECK(c.get_bool("rule.flag", false));

    std::vector<double> axes = c.get_list("domain.axes");
    REQUIRE(axes.size() == 3);
    CHECK(axes[0] == 1.0);
    CHECK(axes[2] == 2.0);

    // Whitespace-separated lists parse too.
    cfg::Config w = cfg::Config::parse_string("xs = 0.5 1.5 2.5\n");
    CHECK(w.get_list("xs").size() == 3);

    CHECK(c.has("domain.kind"));
    CHECK(!c.has("domain.missing"));
    CHECK(c.get("domain.missing", "fallback") == "fallback");

    c.set("domain.kind", "ball");
    CHECK(c.get("domain.kind") == "ball");
}

TEST_CASE("config errors carry origin and line") {
    CHECK_THROWS_AS(cfg::Config::parse_string("a = 1\na = 2\n"), cfg::ConfigError);
    CHECK_THROWS_AS(cfg::Config::parse_string("[unterminated\n"), cfg::ConfigError);
    CHECK_THROWS_AS(cfg::Config::parse_string("[]\n"), cfg::ConfigError);
    CHECK_THROWS_AS(cfg::Config::parse_string("= value\n"), cfg::ConfigError);
    CHECK_THROWS_AS(cfg::Config::parse_string("stray line\n"), cfg::ConfigError);

    try {
        cfg::Config::parse_string("a = 1\na = 2\n", "test.cfg");
        FAIL("expected a duplicate-key error");
    } catch (const cfg::ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("test.cfg:2") != std::string::npos);
        CHECK(msg.find("duplicate") != std::string::npos);
    }

    cfg::Config c = cfg::Config::parse_string("x = relay\nhalf = 2.5\n");
    CHECK_THROWS_AS(c.get("nope"), cfg::ConfigError);
    CHECK_THROWS_AS(c.get_double("x"), cfg::ConfigError);
    CHECK_THROWS_AS(c.get_int("half"), cfg::ConfigError);
    CHECK_THROWS_AS(c.get_bool("x", false), cfg::ConfigError);
    CHECK_THROWS_AS(cfg::Config::parse_file("/nonexistent/starhardy.cfg"), cfg::ConfigError);
}

TEST_CASE("verify command: default run is the frozen ball oracle") {
    fs::path out = make_dir("verify_default");
    REQUIRE(cli::run({"verify", "--out", out.string()}) == 0);

    ordered_json j = read_json(out / "verify.json");
    CHECK(j["command"] == "verify");
    CHECK(j["pass"] == true);
    CHECK(j["report"]["q"].get<double>() == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(j["report"]["constant"].get<double>() == 4.0);
    // The echoed config is the complete resolved manifest.
    CHECK(j["config"]["domain.kind"] == "ball");
    CHECK(j["config"]["rule.radial_levels"] == "40");
    CHECK(j["config"]["verify.mode"] == "subcritical");
    CHECK(j["seed"].is_number());

    CHECK(first_line(out / "verify.csv") == "n,p,Q,Q_err");
}

TEST_CASE("verify command: config file, p sweep, csv rows") {
    fs::path out = make_dir("verify_sweep");
    fs::path conf = write_config("sweep.cfg",
                                 "[domain]\n"
                                 "kind = ellipsoid\n"
                                 "axes = 1, 2, 2\n"
                                 "[exponents]\n"
                                 "n = 3\n"
                                 "[verify]\n"
                                 "mode = subcritical\n"
                                 "p_list = 1, 2\n"
                                 "[function]\n"
                                 "kind = xi\n");
    REQUIRE(cli::run({"verify", "--config", conf.string(), "--out", out.string()}) == 0);

    ordered_json j = read_json(out / "verify.json");
    REQUIRE(j.contains("sweep"));
    REQUIRE(j["sweep"].size() == 2);
    for (const auto& entry : j["sweep"])
        CHECK(entry["q"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

    // Header plus one row per exponent.
    std::ifstream csv(out / "verify.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("maximizer command: xi passes, eta misses a tightened tolerance") {
    fs::path out = make_dir("maximizer_xi");
    fs::path conf = write_config("xi.cfg",
                                 "[maximizer]\n"
                                 "kind = xi\n"
                                 "[exponents]\n"
                                 "p = 2\n");
    REQUIRE(cli::run({"maximizer", "--config", conf.string(), "--out", out.string()}) == 0);
    ordered_json j = read_json(out / "maximizer.json");
    CHECK(j["kind"] == "xi");
    CHECK(j["pass"] == true);
    CHECK(j["rel_gap"].get<double>() < 1e-6);

    // eta on the long ellipsoid sits ~4e-7 from Q = 1: below the default
    // tolerance, above a 1e-9 one. The tolerance miss is exit code 2.
    fs::path out2 = make_dir("maximizer_eta");
    fs::path tight = write_config("eta_tight.cfg",
                                  "[domain]\n"
                                  "kind = ellipsoid\n"
                                  "axes = 0.5, 1, 1\n"
                                  "[maximizer]\n"
                                  "kind = eta\n"
                                  "tolerance = 1e-9\n"
                                  "[function]\n"
                                  "alpha = 2\n");
    CHECK(cli::run({"maximizer", "--config", tight.string(), "--out", out2.string()}) == 2);
    ordered_json j2 = read_json(out2 / "maximizer.json");
    CHECK(j2["pass"] == false);
}

TEST_CASE("sharpness command") {
    fs::path out = make_dir("sharpness");
    fs::path conf = write_config("sharp.cfg",
                                 "[domain]\n"
                                 "kind = ellipsoid\n"
                                 "axes = 1, 2, 2\n"
                                 "[exponents]\n"
                                 "p = 2\n");
    REQUIRE(cli::run({"sharpness", "--config", conf.string(), "--out", out.string()}) == 0);
    ordered_json j = read_json(out / "sharpness.json");
    CHECK(j["pass"] == true);
    CHECK(j["argmax_beta"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["max_closed_form_residual"].get<double>() < 1e-4);
    CHECK(first_line(out / "sharpness.csv") == "beta,Q,Q_closed_form");
}

TEST_CASE("field-check command") {
    fs::path out = make_dir("field_check");
    fs::path conf = write_config("field.cfg",
                                 "[domain]\n"
                                 "kind = star\n"
                                 "profile = linear\n"
                                 "profile_base = 1.0\n"
                                 "profile_coeffs = 0.3, 0, 0\n");
    REQUIRE(cli::run({"field-check", "--config", conf.string(), "--out", out.string()}) == 0);
    ordered_json j = read_json(out / "field-check.json");
    CHECK(j["pass"] == true);
    CHECK(j["report"]["max_ray_deviation"].get<double>() < 1e-12);
    CHECK(j["report"]["samples"] == 1000);
}

TEST_CASE("exit codes: usage, config, and hypothesis failures") {
    fs::path out = make_dir("errors");

    // Unknown subcommand and missing subcommand are usage errors.
    CHECK(cli::run({"explode"}) == 1);
    CHECK(cli::run(std::vector<std::string>{}) == 1);
    CHECK(cli::run({"--help"}) == 0);

    // Missing and malformed config files.
    CHECK(cli::run({"verify", "--config", "/nonexistent.cfg", "--out", out.string()}) == 1);
    fs::path dup = write_config("dup.cfg", "a = 1\na = 2\n");
    CHECK(cli::run({"verify", "--config", dup.string(), "--out", out.string()}) == 1);

    // A config that trips a mathematical hypothesis: eta needs a strictly
    // shortest axis, so a ball is rejected.
    fs::path ball = write_config("eta_ball.cfg",
                                 "[maximizer]\n"
                                 "kind = eta\n");
    CHECK(cli::run({"maximizer", "--config", ball.string(), "--out", out.string()}) == 1);
}

TEST_CASE("reports are deterministic for a fixed config and seed") {
    fs::path a = make_dir("det_a");
    fs::path b = make_dir("det_b");
    REQUIRE(cli::run({"verify", "--out", a.string(), "--seed", "77"}) == 0);
    REQUIRE(cli::run({"verify", "--out", b.string(), "--seed", "77"}) == 0);
    CHECK(without_timestamp(a / "verify.json") == without_timestamp(b / "verify.json"));

    ordered_json j = read_json(a / "verify.json");
    CHECK(j["seed"] == 77);
}
