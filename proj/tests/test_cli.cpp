#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "backlog/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = backlog::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("documented examples") {
    const auto eval = run_cli({"eval", "--lambda", "1", "--production", "0", "--t", "3"});
    CHECK(eval.code == 0);
    CHECK(eval.out == "3\n");

    const auto cum = run_cli({"cumulative", "--lambda", "1", "--production", "1", "--t", "0", "--candidate", "compact"});
    CHECK(cum.code == 0);
    CHECK(cum.out == "0\n");

    const auto ids = run_cli({"identities", "--family", "A1", "--n-max", "30", "--trials", "50", "--seed", "7"});
    CHECK(ids.code == 0);
    CHECK(ids.out == "all passed\n");
}

TEST_CASE("csv and json outputs") {
    const auto csv = run_cli({"eval", "--lambda", "2", "--production", "3", "--t-list", "0.5,1.5", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("lambda,production,t,", 0) == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 3);

    const auto json =
        run_cli({"cumulative", "--lambda", "1", "--production", "1", "--t", "1", "--candidate", "all", "--format", "json"});
    CHECK(json.code == 0);
    const auto j = nlohmann::json::parse(json.out);
    CHECK(j.size() == 6);
    CHECK(json.err.find("warning") != std::string::npos);
}

TEST_CASE("invert and simulate") {
    const auto inv = run_cli({"invert", "--lambda", "1", "--production", "1", "--t", "1"});
    CHECK(inv.code == 0);
    CHECK(std::abs(std::stod(inv.out) - 0.1321205588285577) < 1e-5);

    const auto ext = run_cli({"invert", "--lambda", "1", "--production", "6", "--t", "10", "--gs-precision",
                              "extended", "--gs-order", "32"});
    CHECK(ext.code == 0);

    const auto bad_order = run_cli({"invert", "--lambda", "1", "--production", "1", "--t", "1", "--gs-order", "24"});
    CHECK(bad_order.code == 1);
    CHECK(bad_order.out.empty());

    const std::vector<std::string> sim{"simulate", "--lambda", "1", "--production", "2", "--t", "2",
                                       "--paths", "20000", "--seed", "5"};
    const auto a = run_cli(sim);
    const auto b = run_cli(sim);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto sim4 = sim;
    sim4.insert(sim4.end(), {"--workers", "4"});
    CHECK(run_cli(sim4).out == a.out);
}

TEST_CASE("seed falls back to the environment") {
    const std::vector<std::string> sim{"simulate", "--lambda", "1", "--production", "2", "--t", "2", "--paths", "5000"};
    setenv("BACKLOG_LAB_SEED", "17", 1);
    const auto env = run_cli(sim);
    unsetenv("BACKLOG_LAB_SEED");
    auto explicit_seed = sim;
    explicit_seed.insert(explicit_seed.end(), {"--seed", "17"});
    CHECK(env.code == 0);
    CHECK(env.out == run_cli(explicit_seed).out);
}

TEST_CASE("adjudicate summary") {
    const auto r = run_cli({"adjudicate", "--lambda-list", "1", "--production-list", "0", "--t-list", "1,2", "--summary"});
    CHECK(r.code == 0);
    CHECK(r.out.find("compact,Matches") != std::string::npos);
    CHECK(r.out.find("Fails") == std::string::npos);
}

TEST_CASE("error exit codes and clean data stream") {
    const auto domain = run_cli({"eval", "--lambda", "-1", "--production", "0", "--t", "3"});
    CHECK(domain.code == 1);
    CHECK(domain.out.empty());
    CHECK_FALSE(domain.err.empty());

    const auto neg_t = run_cli({"eval", "--lambda", "1", "--production", "0", "--t-list", "1,-2"});
    CHECK(neg_t.code == 1);
    CHECK(neg_t.out.empty());

    const auto unknown = run_cli({"eval", "--lambda", "1", "--production", "0", "--t", "3", "--bogus"});
    CHECK(unknown.code == 3);
    CHECK(unknown.out.empty());

    CHECK(run_cli({"frobnicate"}).code == 3);
    CHECK(run_cli({}).code == 3);
    CHECK(run_cli({"eval", "--lambda", "abc", "--production", "0", "--t", "1"}).code == 3);

    const auto tol = run_cli({"adjudicate", "--match-tol", "1e-9", "--oracle-tol", "1e-9"});
    CHECK(tol.code == 1);
    CHECK(tol.out.empty());
}

TEST_CASE("help lists flags with units") {
    for (const char* cmd : {"eval", "cumulative", "invert", "simulate", "identities", "adjudicate"}) {
        const auto h = run_cli({cmd, "--help"});
        CAPTURE(cmd);
        CHECK(h.code == 0);
        CHECK(h.out.find("--") != std::string::npos);
    }
    const auto h = run_cli({"eval", "--help"});
    CHECK(h.out.find("units") != std::string::npos);
    CHECK(h.out.find("--lambda") != std::string::npos);
}

TEST_CASE("--out writes the file and nothing to stdout") {
    const auto path = std::filesystem::temp_directory_path() / "backlog_lab_cli_test.csv";
    const auto r =
        run_cli({"eval", "--lambda", "1", "--production", "0", "--t", "3", "--format", "csv", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find(",3\n") != std::string::npos);
    std::filesystem::remove(path);
}
