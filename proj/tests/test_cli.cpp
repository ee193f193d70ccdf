#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rarewave/config.hpp"
#include "rarewave/io.hpp"

using namespace rarewave;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(RAREWAVE_CLI) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parser") {
    Config cfg = Config::parse(
        "# comment\n"
        "top = 1\n"
        "[gas]\n"
        "gamma = 2.0   # trailing comment\n"
        "k0 = 0.5\n"
        "[states]\n"
        "left = 1.0 -0.2 0.0\n");
    CHECK(cfg.get_double("top", 0.0) == 1.0);
    CHECK(cfg.get_double("gas.gamma", 0.0) == 2.0);
    CHECK(cfg.require_double("gas.k0") == 0.5);
    auto left = cfg.get_doubles("states.left");
    REQUIRE(left.size() == 3);
    CHECK(left[1] == -0.2);
    CHECK_THROWS_AS(cfg.require_string("missing.key"), ConfigError);
    CHECK_THROWS_AS(Config::parse("novalue\n"), ConfigError);

    // echo round trip is stable
    Config again = Config::parse(cfg.echo());
    CHECK(again.echo() == cfg.echo());
}

TEST_CASE("field CSV round trip") {
    Grid g{16, 8, 0.5};
    Field2D f(g, 0.25);
    for (int i = 0; i < g.nx1; ++i)
        for (int j = 0; j < g.nx2; ++j)
            f.at(i, j) = to_conserved({1.0 + 0.01 * i + 0.001 * j, 0.1 * i, -0.2 * j});
    fs::path dir = fs::temp_directory_path() / "rarewave_test_io";
    fs::create_directories(dir);
    write_field_csv((dir / "f.csv").string(), f);
    Field2D back = read_field_csv((dir / "f.csv").string(), g, 0.25);
    for (std::size_t n = 0; n < f.data().size(); ++n) {
        REQUIRE(back.data()[n].rho == f.data()[n].rho);
        REQUIRE(back.data()[n].p1 == Catch::Approx(f.data()[n].p1).margin(1e-15));
    }
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("unknown-subcommand --x 1") == 2);
    CHECK(run_cli("solve1d") == 2);  // missing required states
    CHECK(run_cli("solve1d --states.left '1 -0.2 0' --states.right '1 0.2 0'") == 0);
    // vacuum data: model error
    CHECK(run_cli("solve1d --states.left '1 -3 0' --states.right '1 3 0'") == 1);
}

TEST_CASE("cli solve1d value check") {
    fs::path dir = fs::temp_directory_path() / "rarewave_test_cli";
    fs::create_directories(dir);
    std::string cmd = std::string(RAREWAVE_CLI) +
                      " solve1d --states.left '1 -0.2 0' --states.right '1 0.2 0' > " +
                      (dir / "fan.json").string();
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "fan.json"));
    CHECK(j["region"] == "IV");
    CHECK(std::fabs(j["middle"]["rho"].get<double>() - 0.81) < 1e-10);
    CHECK(std::fabs(j["middle"]["v1"].get<double>()) < 1e-10);
}

TEST_CASE("cli determinism: rerun from the echo is byte-identical") {
    fs::path base = fs::temp_directory_path() / "rarewave_test_det";
    fs::remove_all(base);
    std::string common =
        " --states.left '1 -0.2 0' --states.right '1 0.2 0' --run.eps 0.005"
        " --run.t_end 0.15 --run.out_every 0.15 --grid.nx1 64 --grid.nx2 8 --seed 7";
    REQUIRE(run_cli("simulate2d --out " + (base / "a").string() + " --threads 1" + common) == 0);
    REQUIRE(run_cli("simulate2d --out " + (base / "b").string() + " --threads 2" + common) == 0);
    // rerun b from the config echo of a
    REQUIRE(run_cli("simulate2d --out " + (base / "c").string() + " --threads 2 --config " +
                    (base / "a" / "config_echo.cfg").string()) == 0);
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        std::string name = entry.path().filename().string();
        INFO(name);
        REQUIRE(slurp(entry.path()) == slurp(base / "b" / name));
        REQUIRE(slurp(entry.path()) == slurp(base / "c" / name));
    }
}

TEST_CASE("cli simulate2d: plane-symmetric run reports zero asymmetry") {
    fs::path dir = fs::temp_directory_path() / "rarewave_test_plane";
    fs::remove_all(dir);
    REQUIRE(run_cli("simulate2d --out " + dir.string() +
                    " --states.left '1 -0.2 0' --states.right '1 0.2 0'"
                    " --run.t_end 0.2 --run.out_every 0.2 --grid.nx1 64 --grid.nx2 8") == 0);
    auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    for (const auto& s : j["slices"])
        REQUIRE(s["max_plane_asymmetry"].get<double>() < 1e-12);
    CHECK(j["conservation_drift"].get<double>() < 1e-12);
    CHECK(fs::exists(dir / "plot.gp"));
    CHECK(fs::exists(dir / "entropy.json"));
}

TEST_CASE("cli verify-entropy: self comparison of a completed run") {
    fs::path base = fs::temp_directory_path() / "rarewave_test_ve";
    fs::remove_all(base);
    REQUIRE(run_cli("simulate2d --out " + (base / "run").string() +
                    " --states.left '1 -0.2 0' --states.right '1 0.2 0'"
                    " --run.t_end 0.2 --run.out_every 0.1 --grid.nx1 64 --grid.nx2 8") == 0);
    REQUIRE(run_cli("verify-entropy --out " + (base / "rep").string() + " --compare.run_a " +
                    (base / "run").string()) == 0);
    auto j = nlohmann::json::parse(slurp(base / "rep" / "entropy.json"));
    REQUIRE(j["integral_alpha"].size() >= 2);
    for (const auto& ia : j["integral_alpha"]) REQUIRE(ia.get<double>() == 0.0);
    // the smoke run is too coarse for fan cells to survive the edge inset;
    // positivity at real resolution is covered by the library tests
    CHECK(j["fan_sign_min"].get<double>() >= 0.0);
    CHECK(j.contains("gronwall_C"));
}

TEST_CASE("cli build-data: constant background measures zero ansatz constants") {
    fs::path dir = fs::temp_directory_path() / "rarewave_test_bd";
    fs::remove_all(dir);
    REQUIRE(run_cli("build-data --out " + dir.string() +
                    " --states.right '1 0.2 0' --data.delta 0.1 --data.order 3"
                    " --data.m 16 --data.trace constant") == 0);
    auto j = nlohmann::json::parse(slurp(dir / "ansatz.json"));
    REQUIRE(j["matching"]["max_imposed"].get<double>() < 1e-10);
    REQUIRE(j["matching"]["max_lambda0"].get<double>() < 1e-10);
    for (const auto& e : j["entries"]) {
        if (e["name"] == "u_star_over_default") continue;
        INFO(e["name"].get<std::string>());
        REQUIRE(std::fabs(e["measured"].get<double>()) < 5e-7);
    }
    CHECK(fs::exists(dir / "slice.csv"));
}
