#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "dunklkit/report_io.hpp"

using namespace dunklkit;

namespace {

struct RunResult {
    std::string output;  // stdout + stderr
    int exit_code = -1;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = {}) {
    const std::string cmd =
        env_prefix + std::string(DUNKLKIT_CLI_PATH) + " " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("eval prints the closed-form value as schema-1 json") {
    const auto r = run_cli("eval --n 1 --k 1 --x 1,0 --lambda 1,-1 --method reduce");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["schema"] == 1);
    CHECK(j["method"] == "reduce");
    CHECK(std::abs(j["value"].get<double>() - std::cosh(1.0)) < 1e-10);
    CHECK(j["elapsed_ms"] == 0.0);  // timings suppressed unless --timing

    // the emitted report parses back bitwise
    const EvalReport parsed = report_from_json(r.output);
    CHECK(parsed.value == j["value"].get<double>());
    CHECK(report_from_json(report_to_json(parsed)).value == parsed.value);
    CHECK(report_from_json(report_to_json(parsed)).evals == parsed.evals);
}

TEST_CASE("non-dominant lambda exits 2 with a clear message") {
    const auto r = run_cli("eval --n 1 --k 1 --x 1,0 --lambda 1,1 --method reduce");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("lambda not strictly dominant") != std::string::npos);
}

TEST_CASE("arity mismatch and bad method exit 2") {
    CHECK(run_cli("eval --x 1,0 --lambda 1,0,-1").exit_code == 2);
    CHECK(run_cli("eval --x 1,0 --lambda 1,-1 --method nope").exit_code == 2);
    CHECK(run_cli("eval --x 1,0.5 --lambda 1,-1 --method xu").exit_code == 2);
    CHECK(run_cli("eval --x 1,0 --lambda 1,-1 --n 2").exit_code == 2);
}

TEST_CASE("strict mode exits 3 when the estimate exceeds the tolerance") {
    const auto r =
        run_cli("eval --x 0.5,0 --lambda 1,-1 --method reduce --strict --tolerance 1e-18");
    CHECK(r.exit_code == 3);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["flagged"] == true);
}

TEST_CASE("csv format has the fixed header") {
    const auto r = run_cli("eval --x 0,0 --lambda 1,-1 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("value,error_estimate,evals,elapsed_ms\n", 0) == 0);
}

TEST_CASE("table output is byte-identical across thread counts") {
    const std::string base =
        "table --sweep k --from 0.5 --to 2 --step 0.5 --x 0.4,0.1,-0.2 --lambda 2,0,-2";
    const std::string d = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
    const auto r1 = run_cli(base + " --threads 1 --out " + d + "/dk_t1.csv");
    const auto r2 = run_cli(base + " --threads 2 --out " + d + "/dk_t2.csv");
    const auto r8 = run_cli(base + " --threads 8 --out " + d + "/dk_t8.csv");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    REQUIRE(r8.exit_code == 0);
    const auto a = slurp(d + "/dk_t1.csv");
    CHECK(a == slurp(d + "/dk_t2.csv"));
    CHECK(a == slurp(d + "/dk_t8.csv"));
    CHECK(a.rfind("param,value,error_estimate,evals,elapsed_ms\n", 0) == 0);

    // env var fallback drives the same deterministic path
    const auto renv = run_cli("table --sweep k --from 0.5 --to 2 --step 0.5 "
                              "--x 0.4,0.1,-0.2 --lambda 2,0,-2 --out " +
                                  d + "/dk_env.csv",
                              "env DUNKLKIT_THREADS=4 ");
    REQUIRE(renv.exit_code == 0);
    CHECK(a == slurp(d + "/dk_env.csv"));
}

TEST_CASE("malformed sweep ranges exit 2") {
    CHECK(run_cli("table --sweep x --from 1 --to 0 --step 0.5 --lambda 1,-1").exit_code == 2);
    CHECK(run_cli("table --sweep x --from 0 --to 1 --step -0.5 --lambda 1,-1").exit_code == 2);
    CHECK(run_cli("table --sweep y --from 0 --to 1 --step 0.5 --lambda 1,-1").exit_code == 2);
}

TEST_CASE("dual-method table keeps the delta column tiny") {
    const auto r = run_cli(
        "table --sweep x --from 0.25 --to 1 --step 0.25 --k 0.75 --x 1,-0.3 "
        "--lambda 1.2,-0.8 --method reduce --dual");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.output);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "param,value,error_estimate,evals,elapsed_ms,delta");
    int rows = 0;
    while (std::getline(lines, line)) {
        const double delta = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(delta <= 1e-8);
        ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("validate quadrature suite passes and reports residuals") {
    const auto r = run_cli("validate --suite quadrature --n-max 2 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() >= 4);
    for (const auto& c : j["checks"]) CHECK(c["residual"].get<double>() <= c["threshold"].get<double>());
}

TEST_CASE("unknown validate suite exits 2") {
    CHECK(run_cli("validate --suite bogus").exit_code == 2);
}

TEST_CASE("config file supplies defaults that flags override") {
    const std::string d = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp");
    const std::string path = d + "/dk_config.json";
    {
        std::ofstream out(path);
        out << R"({"nodes_per_level": [16], "tolerance": 1e-3, "threads": 2})";
    }
    const auto r = run_cli("eval --x 0.5,0 --lambda 1,-1 --config " + path);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["evals"].get<int>() == 48);  // 16 coarse + 32 refined

    const auto r2 = run_cli("eval --x 0.5,0 --lambda 1,-1 --config " + path + " --nodes 24");
    const auto j2 = nlohmann::json::parse(r2.output);
    CHECK(j2["evals"].get<int>() == 72);

    {
        std::ofstream out(path);
        out << R"({"nodes": [16]})";
    }
    CHECK(run_cli("eval --x 0.5,0 --lambda 1,-1 --config " + path).exit_code == 2);
}
